// Command-line front end. Subcommands:
//   simulate   one success-probability curve        -> curve CSV
//   conditions enhancement-condition report         -> stdout
//   eta        enhancement summary                  -> stdout
//   sweep      t2 / ratio / bc parameter sweep      -> sweep CSV
//   chernoff   Chernoff exponent along the curve    -> chernoff CSV
//   fig3       direction-discrimination bundle      -> multi-curve CSV
//   fig4       control-assisted bundle              -> multi-curve CSV
//
// Scenario values come from the preset, then the config file, then
// command-line flags (last wins). Exit codes: 0 success, 2 configuration
// or usage error, 3 numerical failure (positivity breach, degenerate
// hypotheses), 1 anything else. QHT_THREADS caps sweep concurrency.
//
// CSV conventions: header row, '\n' newlines, '.' decimal separator, 17
// significant digits, booleans as 0/1. Files are written to a temporary
// path and renamed into place.
#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qht/config.hpp"

namespace qht::cli {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

inline unsigned thread_cap() {
    const char* env = std::getenv("QHT_THREADS");
    if (env == nullptr || *env == '\0') {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0)
        throw config_error({std::string("QHT_THREADS: expected a positive integer, got '") + env +
                            "'"});
    return static_cast<unsigned>(v);
}

namespace detail {

// Scenario-related flags shared by every subcommand; values are collected
// as strings and merged into the config map so file and flag inputs go
// through the same validation.
struct ScenarioFlags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;  // (section.key, value)

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (INI-style sections)");
        add(cmd, "--preset", "scenario.preset", "preset: fig3, fig4 or custom");
        add(cmd, "--q0", "scenario.q0", "prior of hypothesis 0 (q1 = 1 - q0 unless given)");
        add(cmd, "--q1", "scenario.q1", "prior of hypothesis 1");
        add(cmd, "--gamma", "scenario.gamma", "gyromagnetic ratio, rad/s/T");
        add(cmd, "--b0", "hypothesis0.b_nT", "field magnitude of hypothesis 0, nT");
        add(cmd, "--theta0", "hypothesis0.theta_deg", "field angle of hypothesis 0, deg");
        add(cmd, "--b1", "hypothesis1.b_nT", "field magnitude of hypothesis 1, nT");
        add(cmd, "--theta1", "hypothesis1.theta_deg", "field angle of hypothesis 1, deg");
        add(cmd, "--bc", "control.bc_nT", "control field along x, nT");
        add(cmd, "--t1", "noise.t1_s", "longitudinal relaxation time, s");
        add(cmd, "--t2", "noise.t2_s", "transverse relaxation time, s");
        add(cmd, "--kappa1", "noise.kappa1", "dephasing rate, 1/s");
        add(cmd, "--kappa2", "noise.kappa2", "damping rate, 1/s");
        add(cmd, "--p-ground", "noise.p_ground", "steady-state ground population");
        add(cmd, "--axis-binding", "noise.axis_binding", "noise axis binding: locked or fixed");
        add(cmd, "--fixed-axis-theta", "noise.fixed_axis_theta_deg", "fixed noise axis angle, deg");
        add(cmd, "--probe", "probe.kind", "probe state: ket0, along_x, optimal or bloch");
        add(cmd, "--probe-theta", "probe.theta_deg", "bloch probe polar angle, deg");
        add(cmd, "--probe-phi", "probe.phi_deg", "bloch probe azimuth, deg");
        add(cmd, "--horizon", "time.horizon_s", "time horizon, s");
        add(cmd, "--grid", "time.grid_points", "number of grid points");
        add(cmd, "--method", "integrator.method", "propagation method: superop or rk4");
        add(cmd, "--dt-max", "integrator.dt_max_s", "rk4 step cap, s");
    }

    RunConfig load() const {
        std::vector<std::string> violations;
        ConfigMap map;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) throw config_error({"cannot read config file: " + config_path});
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            map = cfg_detail::parse_sections(text, violations);
        }
        for (const auto& [path, value] : overrides) {
            const std::size_t dot = path.find('.');
            map[path.substr(0, dot)][path.substr(dot + 1)] = value;
        }
        // If only q0 was given, keep the priors normalized.
        if (map.count("scenario") && map["scenario"].count("q0") &&
            !map["scenario"].count("q1")) {
            try {
                map["scenario"]["q1"] = fmt17(1.0 - std::stod(map["scenario"]["q0"]));
            } catch (const std::exception&) {
                // build_config reports the malformed q0
            }
        }
        return build_config(std::move(map), std::move(violations));
    }

  private:
    void add(CLI::App* cmd, const std::string& flag, const std::string& target,
             const std::string& help) {
        cmd->add_option_function<std::string>(
               flag,
               [this, target](const std::string& v) { overrides.emplace_back(target, v); }, help)
            ->take_last();
    }
};

inline std::string curve_csv(const TimeSeries& ts) {
    std::string out = "t_s,p_noisy,p_unitary,trace_distance_noisy,trace_distance_unitary\n";
    for (std::size_t k = 0; k < ts.times.size(); ++k) {
        out += fmt17(ts.times[k]) + ',' + fmt17(ts.p_noisy[k]) + ',' + fmt17(ts.p_unitary[k]) +
               ',' + fmt17(ts.trace_distance_noisy[k]) + ',' + fmt17(ts.trace_distance_unitary[k]) +
               '\n';
    }
    return out;
}

inline std::string sweep_csv(const SweepResult& r) {
    std::string out = "param_value,eta,t_star_s,exceeds_unitary_max,p_noisy_max\n";
    for (const auto& pt : r.points) {
        if (!pt.error.empty()) continue;
        out += fmt17(pt.value) + ',' + fmt17(pt.report.eta) + ',' + fmt17(pt.report.t_star) + ',' +
               (pt.report.exceeds_unitary_max ? "1" : "0") + ',' + fmt17(pt.report.p_noisy_max) +
               '\n';
    }
    return out;
}

inline void print_report(std::ostream& os, const Scenario& s, const EnhancementReport& rep) {
    os << "scenario: " << scenario_fingerprint(s) << "\n"
       << "eta: " << fmt17(rep.eta) << "\n"
       << "t_star_s: " << fmt17(rep.t_star) << "\n"
       << "exceeds_unitary_max: " << (rep.exceeds_unitary_max ? "true" : "false") << "\n"
       << "p_noisy_max: " << fmt17(rep.p_noisy_max) << "\n"
       << "p_unitary_curve_max: " << fmt17(rep.unitary_max_value) << "\n";
}

inline int cmd_simulate(const ScenarioFlags& flags, const std::string& out_path,
                        std::ostream& os) {
    const RunConfig cfg = flags.load();
    const TimeSeries ts = success_curve(cfg.scenario);
    const auto ds = difference_spectrum(hypothesis0(cfg.scenario).hamiltonian,
                                        hypothesis1(cfg.scenario).hamiltonian);
    const EnhancementReport rep = enhancement_from_series(ts, ds.lambda_max - ds.lambda_min);
    if (!out_path.empty()) atomic_write(out_path, curve_csv(ts));
    print_report(os, cfg.scenario, rep);
    return 0;
}

inline int cmd_conditions(const ScenarioFlags& flags, std::ostream& os) {
    const RunConfig cfg = flags.load();
    const ConditionReport rep = check_conditions(cfg.scenario);
    os << "x1: " << fmt17(rep.x1) << "\n"
       << "y1: " << fmt17(rep.y1) << "\n"
       << "z1: " << fmt17(rep.z1) << "\n"
       << "w1: " << fmt17(rep.w1) << "\n"
       << "lambda_max: " << fmt17(rep.lambda_max) << "\n"
       << "lambda_min: " << fmt17(rep.lambda_min) << "\n"
       << "cond1: " << (rep.cond1 ? "true" : "false") << "\n"
       << "cond2: " << (rep.cond2 ? "true" : "false") << "\n"
       << "near_boundary: " << (rep.near_boundary ? "true" : "false") << "\n";
    return 0;
}

inline int cmd_eta(const ScenarioFlags& flags, std::ostream& os) {
    const RunConfig cfg = flags.load();
    print_report(os, cfg.scenario, enhancement_eta(cfg.scenario));
    return 0;
}

inline int cmd_sweep(const ScenarioFlags& flags, const std::string& param,
                     std::vector<double> values, const std::string& mode,
                     const std::string& out_path, std::ostream& os) {
    const RunConfig cfg = flags.load();
    const unsigned threads = thread_cap();
    if (values.empty()) {
        // Default grids: 25 log-spaced ratio points over 3 decades, 21
        // control-field points in [0, 3] nT. T2 has no natural default.
        if (param == "ratio")
            for (int k = 0; k < 25; ++k) values.push_back(3.0 * k / 24.0);
        else if (param == "bc")
            for (int k = 0; k < 21; ++k) values.push_back(3.0 * k / 20.0);
        else
            throw config_error({"sweep: --values is required for --param t2"});
    }
    SweepResult result;
    if (param == "t2") {
        result = sweep_T2(cfg.scenario, values, false, threads);
    } else if (param == "ratio") {
        RatioMode rm;
        if (mode == "fix_t1")
            rm = RatioMode::fix_T1;
        else if (mode == "fix_t2")
            rm = RatioMode::fix_T2;
        else
            throw config_error({"sweep: --mode must be fix_t1 or fix_t2, got '" + mode + "'"});
        result = sweep_ratio(cfg.scenario, values, rm, false, threads);
    } else if (param == "bc") {
        result = sweep_control(cfg.scenario, values, false, threads);
    } else {
        throw config_error({"sweep: --param must be t2, ratio or bc, got '" + param + "'"});
    }
    if (!out_path.empty()) atomic_write(out_path, sweep_csv(result));
    for (const auto& pt : result.points) {
        os << result.parameter << "=" << fmt17(pt.value) << ": ";
        if (!pt.error.empty()) {
            os << "error: " << pt.error << "\n";
        } else {
            os << "eta=" << fmt17(pt.report.eta) << " t_star_s=" << fmt17(pt.report.t_star)
               << " exceeds=" << (pt.report.exceeds_unitary_max ? "1" : "0")
               << " p_noisy_max=" << fmt17(pt.report.p_noisy_max) << "\n";
        }
    }
    const int best = argmax_eta(result);
    if (best >= 0)
        os << "argmax: " << result.parameter << "=" << fmt17(result.points[best].value)
           << " eta=" << fmt17(result.points[best].report.eta) << "\n";
    return 0;
}

inline int cmd_chernoff(const ScenarioFlags& flags, const std::string& out_path,
                        std::ostream& os) {
    const RunConfig cfg = flags.load();
    const Scenario& s = cfg.scenario;
    validate_scenario(s);
    const Hypothesis h0 = hypothesis0(s);
    const Hypothesis h1 = hypothesis1(s);
    const DensityMatrix probe = probe_state(s.probe, h0.hamiltonian, h1.hamiltonian);
    const auto times = time_grid(s.horizon_s, s.grid_points);
    const auto rho0 = propagate_grid(probe.rho, h0.hamiltonian, h0.lindblad_ops, times, s.settings);
    const auto rho1 = propagate_grid(probe.rho, h1.hamiltonian, h1.lindblad_ops, times, s.settings);

    std::string csv = "t_s,s_star,q_star,exponent\n";
    double best_exponent = 0.0, best_t = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const ChernoffResult res = chernoff(make_density(rho0[k]), make_density(rho1[k]));
        csv += fmt17(times[k]) + ',' + fmt17(res.s_star) + ',' + fmt17(res.q_star) + ',' +
               fmt17(res.exponent) + '\n';
        if (res.exponent > best_exponent) {
            best_exponent = res.exponent;
            best_t = times[k];
        }
    }
    if (!out_path.empty()) atomic_write(out_path, csv);
    os << "max_exponent: " << fmt17(best_exponent) << "\n"
       << "t_at_max_s: " << fmt17(best_t) << "\n";
    return 0;
}

// Multi-curve bundles. Column labels carry the varied parameter; the
// unitary reference uses the same probe and Hamiltonians as the noisy runs.
inline int cmd_bundle(bool control_assisted, const std::string& out_path, std::ostream& os) {
    const std::vector<double> t2s =
        control_assisted ? std::vector<double>{7.4, 1.0, 0.6} : std::vector<double>{5.4, 1.0, 0.6, 11.0};
    Scenario base = control_assisted ? scenario_fig4(1.0, 0.75) : scenario_fig3(1.0);

    std::vector<TimeSeries> curves;
    std::vector<std::string> labels;
    for (double t2 : t2s) {
        Scenario s = base;
        const double T1 = 1.0 / base.noise.kappa2;
        const auto rates = times_to_rates(T1, t2);
        s.noise.kappa1 = rates[0];
        s.noise.kappa2 = rates[1];
        curves.push_back(success_curve(s));
        labels.push_back("p_noisy_t2_" + std::to_string(t2).substr(0, 4) + "s");
    }
    if (control_assisted) {
        Scenario gray = base;
        gray.control_Bc_nT = 0.0;
        curves.push_back(success_curve(gray));
        labels.push_back("p_noisy_no_control_t2_1.0s");
    }

    std::string csv = "t_s,p_unitary";
    for (const auto& label : labels) csv += ',' + label;
    csv += '\n';
    for (std::size_t k = 0; k < curves.front().times.size(); ++k) {
        csv += fmt17(curves.front().times[k]) + ',' + fmt17(curves.front().p_unitary[k]);
        for (const auto& c : curves) csv += ',' + fmt17(c.p_noisy[k]);
        csv += '\n';
    }
    if (!out_path.empty()) atomic_write(out_path, csv);

    const auto ds = difference_spectrum(hypothesis0(base).hamiltonian,
                                        hypothesis1(base).hamiltonian);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const EnhancementReport rep =
            enhancement_from_series(curves[i], ds.lambda_max - ds.lambda_min);
        os << labels[i] << ": eta=" << fmt17(rep.eta)
           << " exceeds=" << (rep.exceeds_unitary_max ? "1" : "0")
           << " p_noisy_max=" << fmt17(rep.p_noisy_max) << "\n";
    }
    return 0;
}

}  // namespace detail

inline int run_command(std::vector<std::string> args, std::ostream& os = std::cout,
                       std::ostream& err = std::cerr) {
    CLI::App app{"noise-assisted binary hypothesis testing on a two-level system"};
    app.require_subcommand(1);

    detail::ScenarioFlags flags;
    std::string out_path, param = "t2", mode = "fix_t1";
    std::vector<double> values;

    auto* simulate = app.add_subcommand("simulate", "compute one success-probability curve");
    flags.add_to(simulate);
    simulate->add_option("--out", out_path, "curve CSV output path");

    auto* conditions = app.add_subcommand("conditions", "evaluate the enhancement conditions");
    flags.add_to(conditions);

    auto* eta = app.add_subcommand("eta", "enhancement summary for one scenario");
    flags.add_to(eta);

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
    flags.add_to(sweep);
    sweep->add_option("--param", param, "parameter to sweep: t2, ratio or bc");
    sweep->add_option("--values", values,
                      "parameter values (ratio sweeps take log10(T1/T2)); ratio and bc "
                      "sweeps have default grids")
        ->delimiter(',');
    sweep->add_option("--mode", mode, "ratio sweeps: fix_t1 or fix_t2");
    sweep->add_option("--out", out_path, "sweep CSV output path");

    auto* chernoff_cmd = app.add_subcommand("chernoff", "Chernoff exponent along the curve");
    flags.add_to(chernoff_cmd);
    chernoff_cmd->add_option("--out", out_path, "chernoff CSV output path");

    auto* fig3 = app.add_subcommand("fig3", "direction-discrimination curve bundle");
    fig3->add_option("--out", out_path, "bundle CSV output path");

    auto* fig4 = app.add_subcommand("fig4", "control-assisted curve bundle");
    fig4->add_option("--out", out_path, "bundle CSV output path");

    std::reverse(args.begin(), args.end());  // CLI11's vector API wants reversed args
    try {
        app.parse(args);
        if (simulate->parsed()) return detail::cmd_simulate(flags, out_path, os);
        if (conditions->parsed()) return detail::cmd_conditions(flags, os);
        if (eta->parsed()) return detail::cmd_eta(flags, os);
        if (sweep->parsed()) return detail::cmd_sweep(flags, param, values, mode, out_path, os);
        if (chernoff_cmd->parsed()) return detail::cmd_chernoff(flags, out_path, os);
        if (fig3->parsed()) return detail::cmd_bundle(false, out_path, os);
        if (fig4->parsed()) return detail::cmd_bundle(true, out_path, os);
        err << "no subcommand given\n";
        return 2;
    } catch (const CLI::CallForHelp&) {
        os << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const unphysical_noise& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const degenerate_hypotheses& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const degenerate_axis& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const numerical_failure& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const invalid_argument& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run_command(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(std::move(args));
}

}  // namespace qht::cli
