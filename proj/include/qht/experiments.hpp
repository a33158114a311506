// Canned scenario builders for the two bundled demonstration setups and
// generic single-parameter sweep drivers. Sweep points are independent and
// may run concurrently; results are always assembled in input order, so
// summaries are bit-identical across runs and thread counts.
#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qht/discrimination.hpp"

namespace qht {

// Two fields of equal magnitude at different angles, locked noise, probe
// |0>: the direction-discrimination demo. T1 is fixed at 5.5 s.
inline Scenario scenario_fig3(double T2_s) {
    Scenario s;
    s.field0 = {1.86, 75.0};
    s.field1 = {1.86, 30.0};
    s.control_Bc_nT = 0.0;
    const auto rates = times_to_rates(5.5, T2_s);
    s.noise.kappa1 = rates[0];
    s.noise.kappa2 = rates[1];
    s.noise.p_ground = 0.5;
    s.noise.binding = AxisBinding::hamiltonian_locked;
    s.probe.kind = ProbeKind::ket0;
    s.horizon_s = 20.0;
    s.grid_points = 400;
    return s;
}

// Two z-axis fields of different magnitude plus an x control field, locked
// noise, probe along x: the control-assisted demo. T1 is fixed at 7.4 s.
inline Scenario scenario_fig4(double T2_s, double Bc_nT) {
    Scenario s;
    s.field0 = {0.2, 90.0};
    s.field1 = {2.79, 90.0};
    s.control_Bc_nT = Bc_nT;
    const auto rates = times_to_rates(7.4, T2_s);
    s.noise.kappa1 = rates[0];
    s.noise.kappa2 = rates[1];
    s.noise.p_ground = 0.5;
    s.noise.binding = AxisBinding::hamiltonian_locked;
    s.probe.kind = ProbeKind::along_x;
    s.horizon_s = 15.0;
    s.grid_points = 300;
    return s;
}

struct SweepPoint {
    double value = 0.0;
    EnhancementReport report;
    std::optional<TimeSeries> series;
    std::string error;  // empty on success; failed points do not stop the sweep
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepPoint> points;
};

namespace detail {

inline void parallel_for(std::size_t n, unsigned max_threads,
                         const std::function<void(std::size_t)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(n, std::min(hw, std::max(1u, max_threads))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

inline SweepResult run_sweep(const std::string& parameter, const std::vector<double>& values,
                             const std::function<Scenario(double)>& make_scenario, bool keep_series,
                             unsigned max_threads) {
    SweepResult result;
    result.parameter = parameter;
    result.points.resize(values.size());
    parallel_for(values.size(), max_threads, [&](std::size_t i) {
        SweepPoint& pt = result.points[i];
        pt.value = values[i];
        try {
            const Scenario sc = make_scenario(values[i]);
            const TimeSeries ts = success_curve(sc);
            const auto ds =
                difference_spectrum(hypothesis0(sc).hamiltonian, hypothesis1(sc).hamiltonian);
            pt.report = enhancement_from_series(ts, ds.lambda_max - ds.lambda_min);
            if (keep_series) pt.series = ts;
        } catch (const std::exception& ex) {
            pt.error = ex.what();
        }
    });
    return result;
}

}  // namespace detail

inline SweepResult sweep_T2(const Scenario& base, const std::vector<double>& T2_values,
                            bool keep_series = false, unsigned max_threads = 1) {
    validate_scenario(base);
    const double T1 = 1.0 / base.noise.kappa2;
    return detail::run_sweep(
        "t2", T2_values,
        [base, T1](double T2) {
            Scenario s = base;
            const auto rates = times_to_rates(T1, T2);
            s.noise.kappa1 = rates[0];
            s.noise.kappa2 = rates[1];
            return s;
        },
        keep_series, max_threads);
}

enum class RatioMode { fix_T1, fix_T2 };

// Sweep of log10(T1/T2). fix_T1 holds the base T1 and shortens T2; fix_T2
// holds the base T2 and stretches T1.
inline SweepResult sweep_ratio(const Scenario& base, const std::vector<double>& log10_ratios,
                               RatioMode mode, bool keep_series = false, unsigned max_threads = 1) {
    validate_scenario(base);
    const auto times = rates_to_times(base.noise.kappa1, base.noise.kappa2);
    return detail::run_sweep(
        "log10_ratio", log10_ratios,
        [base, times, mode](double log10_ratio) {
            const double ratio = std::pow(10.0, log10_ratio);
            Scenario s = base;
            const double T1 = mode == RatioMode::fix_T1 ? times[0] : times[1] * ratio;
            const double T2 = mode == RatioMode::fix_T1 ? times[0] / ratio : times[1];
            const auto rates = times_to_rates(T1, T2);
            s.noise.kappa1 = rates[0];
            s.noise.kappa2 = rates[1];
            return s;
        },
        keep_series, max_threads);
}

inline SweepResult sweep_control(const Scenario& base, const std::vector<double>& Bc_values,
                                 bool keep_series = false, unsigned max_threads = 1) {
    validate_scenario(base);
    return detail::run_sweep(
        "bc_nT", Bc_values,
        [base](double bc) {
            if (!(bc >= 0.0)) throw invalid_argument("sweep_control: Bc must be >= 0");
            Scenario s = base;
            s.control_Bc_nT = bc;
            return s;
        },
        keep_series, max_threads);
}

// Index of the sweep point with the largest eta (first on ties, failed
// points skipped); -1 when every point failed or the sweep is empty.
inline int argmax_eta(const SweepResult& r) {
    int best = -1;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        if (!r.points[i].error.empty()) continue;
        if (best < 0 || r.points[i].report.eta > r.points[best].report.eta)
            best = static_cast<int>(i);
    }
    return best;
}

}  // namespace qht
