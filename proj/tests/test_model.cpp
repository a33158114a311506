#include <cmath>
#include <random>

#include "doctest.h"
#include "qht/model.hpp"
#include "test_helpers.hpp"

using namespace qht;

TEST_CASE("hamiltonian construction") {
    SUBCASE("z field plus x control") {
        // B = 0.2 nT at theta = 90 deg with Bc = 0.75 nT
        const Mat2 h = build_hamiltonian({0.2, 90.0}, 0.75, kProtonGamma);
        const Mat2 expected = (kSigmaZ * cplx(0.2e-9, 0) + kSigmaX * cplx(0.75e-9, 0)) *
                              cplx(-kProtonGamma / 2.0, 0);
        CHECK(norm_max(h - expected) < 1e-22);
        CHECK(std::abs(trace(h)) < 1e-22);
        CHECK(hermiticity_defect(h) < 1e-22);
    }
    SUBCASE("zero field gives the zero matrix") {
        CHECK(norm_max(build_hamiltonian({0.0, 0.0}, 0.0, kProtonGamma)) == 0.0);
    }
    SUBCASE("eigenvalue splitting equals gamma*B") {
        const Mat2 h = build_hamiltonian({1.86, 75.0}, 0.0, kProtonGamma);
        const auto es = hermitian_eig(h);
        const double split = es.eigenvalues[1] - es.eigenvalues[0];
        CHECK(split == doctest::Approx(kProtonGamma * 1.86e-9).epsilon(1e-12));
        CHECK(split == doctest::Approx(0.49759).epsilon(1e-4));
    }
}

TEST_CASE("effective axis") {
    SUBCASE("control tilts a z field") {
        const auto n = effective_axis({0.2, 90.0}, 0.75);
        const double nrm = std::sqrt(0.75 * 0.75 + 0.2 * 0.2);
        CHECK(n[0] == doctest::Approx(0.75 / nrm).epsilon(1e-14));
        CHECK(n[1] == 0.0);
        CHECK(n[2] == doctest::Approx(0.2 / nrm).epsilon(1e-14));
    }
    SUBCASE("no control reproduces the field direction") {
        const auto n = effective_axis({1.0, 30.0}, 0.0);
        CHECK(n[0] == doctest::Approx(std::cos(30.0 * kDegToRad)).epsilon(1e-14));
        CHECK(n[2] == doctest::Approx(std::sin(30.0 * kDegToRad)).epsilon(1e-14));
    }
    SUBCASE("pure control points along x") {
        const auto n = effective_axis({0.0, 90.0}, 1.0);
        CHECK(n[0] == doctest::Approx(1.0));
        CHECK(std::abs(n[2]) < 1e-15);
    }
    SUBCASE("zero total field is degenerate") {
        CHECK_THROWS_AS(effective_axis({0.0, 0.0}, 0.0), degenerate_axis);
    }
}

TEST_CASE("ground and excited states") {
    SUBCASE("z axis") {
        const auto [g, e] = ground_excited({0.0, 0.0, 1.0});
        CHECK(std::abs(g[0] - cplx(1, 0)) < 1e-12);
        CHECK(std::abs(g[1]) < 1e-12);
        // excited = -|1> up to the phase convention, which makes it |1>
        CHECK(std::abs(e[0]) < 1e-12);
        CHECK(std::abs(e[1] - cplx(1, 0)) < 1e-12);
    }
    SUBCASE("x axis") {
        const auto [g, e] = ground_excited({1.0, 0.0, 0.0});
        const double s = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(g[0] - cplx(s, 0)) < 1e-12);
        CHECK(std::abs(g[1] - cplx(s, 0)) < 1e-12);
        CHECK(std::abs(inner(g, e)) < 1e-12);
    }
    SUBCASE("agrees with the eigensolver across angles") {
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> uth(-180.0, 180.0);
        for (int i = 0; i < 100; ++i) {
            const double th = uth(rng) * kDegToRad;
            const std::array<double, 3> axis{std::cos(th), 0.0, std::sin(th)};
            const auto [g, e] = ground_excited(axis);
            const auto es = hermitian_eig(sigma_axis(axis));
            for (int r = 0; r < 2; ++r) {
                CHECK(std::abs(g[r] - es.eigenvector(1)[r]) < 1e-10);
                CHECK(std::abs(e[r] - es.eigenvector(0)[r]) < 1e-10);
            }
            CHECK(std::abs(inner(g, e)) < 1e-12);
        }
    }
    SUBCASE("closed form at 30 degrees") {
        const double th = 30.0 * kDegToRad;
        const auto [g, e] = ground_excited({std::cos(th), 0.0, std::sin(th)});
        const double ng = std::sqrt(2.0 - 2.0 * std::sin(th));
        CHECK(std::abs(g[0] - cplx(std::cos(th) / ng, 0)) < 1e-10);
        CHECK(std::abs(g[1] - cplx((1.0 - std::sin(th)) / ng, 0)) < 1e-10);
        const double ne = std::sqrt(2.0 + 2.0 * std::sin(th));
        // Phase convention flips the printed excited state's overall sign.
        CHECK(std::abs(e[0] - cplx(std::cos(th) / ne, 0)) < 1e-10);
        CHECK(std::abs(e[1] - cplx(-(1.0 + std::sin(th)) / ne, 0)) < 1e-10);
    }
}

TEST_CASE("lindblad operator construction") {
    SUBCASE("z axis channels") {
        NoiseSpec noise;
        noise.kappa1 = 0.25;
        noise.kappa2 = 1.0;
        noise.p_ground = 0.5;
        const auto ops = lindblad_ops({0.0, 0.0, 1.0}, noise);
        REQUIRE(ops.size() == 3);
        CHECK(norm_max(ops[0] - kSigmaZ * cplx(0.5, 0)) < 1e-14);
        Mat2 lower;  // |0><1|
        lower(0, 1) = std::sqrt(0.5);
        Mat2 raise;  // |1><0|
        raise(1, 0) = std::sqrt(0.5);
        CHECK(norm_max(ops[1] - lower) < 1e-12);
        CHECK(norm_max(ops[2] - raise) < 1e-12);
    }
    SUBCASE("zero rates give zero operators with stable shape") {
        const auto ops = lindblad_ops({0.0, 0.0, 1.0}, NoiseSpec{0.0, 0.0, 0.5});
        REQUIRE(ops.size() == 3);
        for (const auto& op : ops) CHECK(norm_max(op) == 0.0);
    }
    SUBCASE("p = 1 keeps only the lowering channel") {
        NoiseSpec noise;
        noise.kappa1 = 0.0;
        noise.kappa2 = 1.0;
        noise.p_ground = 1.0;
        const auto ops = lindblad_ops({0.0, 0.0, 1.0}, noise);
        CHECK(norm_max(ops[0]) == 0.0);
        CHECK(norm_max(ops[2]) == 0.0);
        Mat2 lower;
        lower(0, 1) = 1.0;
        CHECK(norm_max(ops[1] - lower) < 1e-12);
    }
    SUBCASE("total jump weight is bounded") {
        std::mt19937 rng(13);
        std::uniform_real_distribution<double> uth(-180.0, 180.0);
        std::uniform_real_distribution<double> uk(0.0, 3.0);
        std::uniform_real_distribution<double> up(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double th = uth(rng) * kDegToRad;
            NoiseSpec noise;
            noise.kappa1 = uk(rng);
            noise.kappa2 = uk(rng);
            noise.p_ground = up(rng);
            const auto ops = lindblad_ops({std::cos(th), 0.0, std::sin(th)}, noise);
            Mat2 total;
            for (const auto& op : ops) total += adjoint(op) * op;
            CHECK(hermiticity_defect(total) < 1e-13);
            const auto es = hermitian_eig(total);
            CHECK(es.eigenvalues[0] > -1e-13);
            CHECK(es.eigenvalues[1] < noise.kappa1 + noise.kappa2 + 1e-12);
        }
    }
}

TEST_CASE("relaxation time mapping") {
    SUBCASE("pure damping") {
        const auto t = rates_to_times(0.0, 1.0);
        CHECK(t[0] == doctest::Approx(1.0));
        CHECK(t[1] == doctest::Approx(2.0));
    }
    SUBCASE("inverse mapping and round trip") {
        const auto r = times_to_rates(5.5, 0.6);
        CHECK(r[1] == doctest::Approx(1.0 / 5.5).epsilon(1e-12));
        CHECK(r[0] == doctest::Approx((2.0 / 0.6 - 1.0 / 5.5) / 4.0).epsilon(1e-12));
        const auto t = rates_to_times(r[0], r[1]);
        CHECK(t[0] == doctest::Approx(5.5).epsilon(1e-12));
        CHECK(t[1] == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("T2 above 2*T1 is unphysical") {
        CHECK_THROWS_AS(times_to_rates(5.5, 12.0), unphysical_noise);
    }
    SUBCASE("derived T2 never exceeds 2*T1") {
        std::mt19937 rng(404);
        std::uniform_real_distribution<double> uk(0.0, 5.0);
        for (int i = 0; i < 200; ++i) {
            const double k1 = uk(rng);
            const double k2 = uk(rng) + 1e-3;
            const auto t = rates_to_times(k1, k2);
            CHECK(t[1] <= 2.0 * t[0] + 1e-12);
        }
    }
}

TEST_CASE("axis binding distinguishes shared from field-locked noise") {
    NoiseSpec locked;
    locked.kappa1 = 0.5;
    locked.kappa2 = 0.2;
    locked.binding = AxisBinding::hamiltonian_locked;

    const Hypothesis h0 = make_hypothesis({1.86, 75.0}, 0.0, kProtonGamma, locked);
    const Hypothesis h1 = make_hypothesis({1.86, 30.0}, 0.0, kProtonGamma, locked);
    // Locked binding: different field directions give different operators.
    double diff = 0.0;
    for (std::size_t k = 0; k < 3; ++k) diff = std::max(diff, norm_max(h0.lindblad_ops[k] - h1.lindblad_ops[k]));
    CHECK(diff > 0.1);

    NoiseSpec fixed = locked;
    fixed.binding = AxisBinding::fixed_axis;
    fixed.fixed_theta_deg = 90.0;
    const Hypothesis f0 = make_hypothesis({1.86, 75.0}, 0.0, kProtonGamma, fixed);
    const Hypothesis f1 = make_hypothesis({1.86, 30.0}, 0.0, kProtonGamma, fixed);
    for (std::size_t k = 0; k < 3; ++k) CHECK(norm_max(f0.lindblad_ops[k] - f1.lindblad_ops[k]) == 0.0);

    // Hypothesis invariants: orthogonal ground/excited pair.
    CHECK(std::abs(inner(h0.ground, h0.excited)) < 1e-12);
    CHECK(std::abs(inner(h1.ground, h1.excited)) < 1e-12);
}
