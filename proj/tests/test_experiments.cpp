#include <cmath>

#include "doctest.h"
#include "qht/experiments.hpp"

using namespace qht;

TEST_CASE("canned scenario builders") {
    SUBCASE("direction demo rates") {
        const Scenario s = scenario_fig3(0.6);
        CHECK(s.noise.kappa1 == doctest::Approx(0.787879).epsilon(1e-5));
        CHECK(s.noise.kappa2 == doctest::Approx(0.181818).epsilon(1e-5));
        CHECK(s.probe.kind == ProbeKind::ket0);
        CHECK(s.control_Bc_nT == 0.0);
        // Round trip through the time mapping has no drift.
        const auto t = rates_to_times(s.noise.kappa1, s.noise.kappa2);
        CHECK(t[0] == doctest::Approx(5.5).epsilon(1e-12));
        CHECK(t[1] == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("pure damping boundary") {
        const Scenario s = scenario_fig3(11.0);  // T2 = 2 T1
        CHECK(s.noise.kappa1 == doctest::Approx(0.0));
        CHECK(s.noise.kappa2 == doctest::Approx(1.0 / 5.5).epsilon(1e-12));
    }
    SUBCASE("unphysical T2 is rejected") {
        CHECK_THROWS_AS(scenario_fig3(12.0), unphysical_noise);
        CHECK_THROWS_AS(scenario_fig4(15.0, 0.75), unphysical_noise);
    }
    SUBCASE("control demo geometry") {
        const Scenario s = scenario_fig4(1.0, 0.75);
        CHECK(s.field0.theta_deg == 90.0);
        CHECK(s.field1.theta_deg == 90.0);
        CHECK(s.control_Bc_nT == 0.75);
        CHECK(s.probe.kind == ProbeKind::along_x);
        CHECK(1.0 / s.noise.kappa2 == doctest::Approx(7.4).epsilon(1e-12));
    }
    SUBCASE("without control both hypotheses share their jump operators") {
        const Scenario s = scenario_fig4(1.0, 0.0);
        const Hypothesis h0 = hypothesis0(s);
        const Hypothesis h1 = hypothesis1(s);
        for (int k = 0; k < 3; ++k)
            CHECK(norm_max(h0.lindblad_ops[k] - h1.lindblad_ops[k]) < 1e-15);

        const Scenario c = scenario_fig4(1.0, 0.75);
        const Hypothesis c0 = hypothesis0(c);
        const Hypothesis c1 = hypothesis1(c);
        double diff = 0.0;
        for (int k = 0; k < 3; ++k) diff = std::max(diff, norm_max(c0.lindblad_ops[k] - c1.lindblad_ops[k]));
        CHECK(diff > 0.01);
    }
}

TEST_CASE("T2 sweep") {
    Scenario base = scenario_fig3(1.0);
    base.horizon_s = 1.5;
    base.grid_points = 151;

    SUBCASE("empty input gives an empty sweep") {
        const SweepResult r = sweep_T2(base, {});
        CHECK(r.points.empty());
    }
    SUBCASE("single point equals a direct run") {
        const SweepResult r = sweep_T2(base, {0.6});
        REQUIRE(r.points.size() == 1);
        CHECK(r.points[0].error.empty());
        Scenario direct = scenario_fig3(0.6);
        direct.horizon_s = base.horizon_s;
        direct.grid_points = base.grid_points;
        const EnhancementReport rep = enhancement_eta(direct);
        CHECK(r.points[0].report.eta == doctest::Approx(rep.eta).epsilon(1e-15));
        CHECK(r.points[0].report.t_star == doctest::Approx(rep.t_star).epsilon(1e-15));
    }
    SUBCASE("failed points are recorded and the sweep continues") {
        const SweepResult r = sweep_T2(base, {0.6, 12.0, 1.0});
        REQUIRE(r.points.size() == 3);
        CHECK(r.points[0].error.empty());
        CHECK(!r.points[1].error.empty());
        CHECK(r.points[2].error.empty());
    }
    SUBCASE("keep_series retains the full curves") {
        const SweepResult r = sweep_T2(base, {0.6}, true);
        REQUIRE(r.points[0].series.has_value());
        CHECK(r.points[0].series->times.size() == 151);
    }
}

TEST_CASE("ratio sweep modes") {
    Scenario base = scenario_fig3(1.0);
    base.horizon_s = 1.5;
    base.grid_points = 151;

    SUBCASE("fix_T1 keeps T1 and shrinks T2") {
        const SweepResult r = sweep_ratio(base, {1.0}, RatioMode::fix_T1);
        REQUIRE(r.points.size() == 1);
        CHECK(r.points[0].error.empty());
        // T1 = 5.5, T2 = 0.55 reproduces the same summary as a direct run.
        Scenario direct = base;
        const auto rates = times_to_rates(5.5, 0.55);
        direct.noise.kappa1 = rates[0];
        direct.noise.kappa2 = rates[1];
        const EnhancementReport rep = enhancement_eta(direct);
        CHECK(r.points[0].report.eta == doctest::Approx(rep.eta).epsilon(1e-15));
    }
    SUBCASE("fix_T2 keeps T2 and stretches T1") {
        const SweepResult r = sweep_ratio(base, {1.0}, RatioMode::fix_T2);
        REQUIRE(r.points.size() == 1);
        Scenario direct = base;
        const auto rates = times_to_rates(10.0, 1.0);
        direct.noise.kappa1 = rates[0];
        direct.noise.kappa2 = rates[1];
        const EnhancementReport rep = enhancement_eta(direct);
        CHECK(r.points[0].report.eta == doctest::Approx(rep.eta).epsilon(1e-15));
    }
    SUBCASE("pure-damping boundary point is included") {
        // ratio = 1/2 means T2 = 2 T1, i.e. kappa1 = 0.
        const SweepResult r = sweep_ratio(base, {std::log10(0.5)}, RatioMode::fix_T1);
        CHECK(r.points[0].error.empty());
    }
    SUBCASE("at fixed large ratio, smaller T1 yields larger eta") {
        Scenario small = base;
        {
            const auto rates = times_to_rates(2.0, 2.0);  // T1 = T2 = 2 s base
            small.noise.kappa1 = rates[0];
            small.noise.kappa2 = rates[1];
        }
        const double ratio = 2.0;  // 10^2
        const SweepResult r_small = sweep_ratio(small, {ratio}, RatioMode::fix_T1);
        const SweepResult r_large = sweep_ratio(base, {ratio}, RatioMode::fix_T1);
        CHECK(r_small.points[0].report.eta > r_large.points[0].report.eta);
    }
}

TEST_CASE("control sweep") {
    Scenario base = scenario_fig4(1.0, 0.75);
    base.horizon_s = 5.0;
    base.grid_points = 251;

    SUBCASE("no control gives no enhancement") {
        const SweepResult r = sweep_control(base, {0.0});
        CHECK(r.points[0].report.eta <= 1e-12);
    }
    SUBCASE("enhancement rises then falls across the control grid") {
        std::vector<double> bcs;
        for (int k = 0; k <= 10; ++k) bcs.push_back(3.0 * k / 10.0);
        const SweepResult r = sweep_control(base, bcs);
        const int best = argmax_eta(r);
        REQUIRE(best >= 0);
        CHECK(best > 0);
        CHECK(best < static_cast<int>(r.points.size()) - 1);
        CHECK(r.points[best].report.eta > r.points.front().report.eta);
        CHECK(r.points[best].report.eta > r.points.back().report.eta);
    }
    SUBCASE("single-point sweep equals a direct run") {
        const SweepResult r = sweep_control(base, {0.75});
        const EnhancementReport rep = enhancement_eta(base);
        CHECK(r.points[0].report.eta == doctest::Approx(rep.eta).epsilon(1e-15));
    }
    SUBCASE("negative control is recorded as a per-point error") {
        const SweepResult r = sweep_control(base, {-1.0, 0.75});
        CHECK(!r.points[0].error.empty());
        CHECK(r.points[1].error.empty());
    }
}

TEST_CASE("sweeps are deterministic across thread counts") {
    Scenario base = scenario_fig3(1.0);
    base.horizon_s = 2.0;
    base.grid_points = 101;
    const std::vector<double> t2s{5.4, 2.0, 1.0, 0.6, 0.3};
    const SweepResult serial = sweep_T2(base, t2s, false, 1);
    const SweepResult threaded = sweep_T2(base, t2s, false, 4);
    REQUIRE(serial.points.size() == threaded.points.size());
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(serial.points[i].report.eta == threaded.points[i].report.eta);
        CHECK(serial.points[i].report.t_star == threaded.points[i].report.t_star);
        CHECK(serial.points[i].report.p_noisy_max == threaded.points[i].report.p_noisy_max);
        CHECK(serial.points[i].report.exceeds_unitary_max ==
              threaded.points[i].report.exceeds_unitary_max);
    }
}
