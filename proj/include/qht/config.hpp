// Run configuration: an INI-style key/value format with sections
//   [scenario] [hypothesis0] [hypothesis1] [control] [noise] [probe]
//   [time] [integrator]
// parsed into a Scenario. Parsing validates everything and reports the
// full list of violations, not just the first; unknown sections or keys
// are errors. An empty file yields the default direction-discrimination
// preset (fig3, T2 = 1 s).
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qht/experiments.hpp"

namespace qht {

struct config_error : std::runtime_error {
    std::vector<std::string> violations;
    explicit config_error(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& x : v) s += "\n  - " + x;
        return s;
    }
};

struct RunConfig {
    std::string preset = "fig3";
    Scenario scenario;
};

// section -> key -> value, preserving only the last assignment per key.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

namespace cfg_detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline ConfigMap parse_sections(const std::string& text, std::vector<std::string>& violations) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                violations.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            violations.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        if (section.empty()) {
            violations.push_back("line " + std::to_string(lineno) + ": key outside any section");
            continue;
        }
        map[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return map;
}

inline std::optional<double> take_number(ConfigMap& map, const std::string& section,
                                         const std::string& key,
                                         std::vector<std::string>& violations) {
    auto sit = map.find(section);
    if (sit == map.end()) return std::nullopt;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return std::nullopt;
    const std::string value = kit->second;
    sit->second.erase(kit);
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        violations.push_back(section + "." + key + ": not a number: '" + value + "'");
        return std::nullopt;
    }
}

inline std::optional<std::string> take_string(ConfigMap& map, const std::string& section,
                                              const std::string& key) {
    auto sit = map.find(section);
    if (sit == map.end()) return std::nullopt;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return std::nullopt;
    std::string value = kit->second;
    sit->second.erase(kit);
    return value;
}

}  // namespace cfg_detail

// Builds a validated RunConfig from parsed sections (the CLI merges its
// flag overrides into the map before calling this). Throws config_error
// listing every violation.
inline RunConfig build_config(ConfigMap map, std::vector<std::string> violations = {}) {
    using cfg_detail::take_number;
    using cfg_detail::take_string;

    RunConfig cfg;
    if (auto preset = take_string(map, "scenario", "preset")) cfg.preset = *preset;

    double default_T2 = 1.0;
    if (cfg.preset == "fig3") {
        cfg.scenario = scenario_fig3(default_T2);
    } else if (cfg.preset == "fig4") {
        cfg.scenario = scenario_fig4(default_T2, 0.75);
    } else if (cfg.preset == "custom") {
        cfg.scenario = scenario_fig3(default_T2);  // neutral starting values
    } else {
        violations.push_back("scenario.preset: unknown preset '" + cfg.preset +
                             "' (expected fig3, fig4 or custom)");
        cfg.scenario = scenario_fig3(default_T2);
    }
    Scenario& s = cfg.scenario;

    if (auto v = take_number(map, "scenario", "q0", violations)) s.q0 = *v;
    if (auto v = take_number(map, "scenario", "q1", violations)) s.q1 = *v;
    if (auto v = take_number(map, "scenario", "gamma", violations)) s.gamma = *v;

    if (auto v = take_number(map, "hypothesis0", "b_nT", violations)) s.field0.magnitude_nT = *v;
    if (auto v = take_number(map, "hypothesis0", "theta_deg", violations)) s.field0.theta_deg = *v;
    if (auto v = take_number(map, "hypothesis1", "b_nT", violations)) s.field1.magnitude_nT = *v;
    if (auto v = take_number(map, "hypothesis1", "theta_deg", violations)) s.field1.theta_deg = *v;
    if (auto v = take_number(map, "control", "bc_nT", violations)) s.control_Bc_nT = *v;

    // Noise accepts either relaxation times or rates, not both.
    const auto t1 = take_number(map, "noise", "t1_s", violations);
    const auto t2 = take_number(map, "noise", "t2_s", violations);
    const auto k1 = take_number(map, "noise", "kappa1", violations);
    const auto k2 = take_number(map, "noise", "kappa2", violations);
    if ((t1 || t2) && (k1 || k2)) {
        violations.push_back("noise: specify either t1_s/t2_s or kappa1/kappa2, not both");
    } else if (k1 || k2) {
        if (k1) s.noise.kappa1 = *k1;
        if (k2) s.noise.kappa2 = *k2;
        if (s.noise.kappa1 < 0.0 || s.noise.kappa2 < 0.0)
            violations.push_back("noise: rates must be >= 0");
    } else if (t1 || t2) {
        const auto current = rates_to_times(std::max(s.noise.kappa1, 0.0),
                                            std::max(s.noise.kappa2, 1e-300));
        const double T1 = t1 ? *t1 : current[0];
        const double T2 = t2 ? *t2 : current[1];
        try {
            const auto rates = times_to_rates(T1, T2);
            s.noise.kappa1 = rates[0];
            s.noise.kappa2 = rates[1];
        } catch (const std::exception& ex) {
            violations.push_back(std::string("noise: ") + ex.what());
        }
    }
    if (auto v = take_number(map, "noise", "p_ground", violations)) s.noise.p_ground = *v;
    if (auto v = take_string(map, "noise", "axis_binding")) {
        if (*v == "locked")
            s.noise.binding = AxisBinding::hamiltonian_locked;
        else if (*v == "fixed")
            s.noise.binding = AxisBinding::fixed_axis;
        else
            violations.push_back("noise.axis_binding: expected locked or fixed, got '" + *v + "'");
    }
    if (auto v = take_number(map, "noise", "fixed_axis_theta_deg", violations))
        s.noise.fixed_theta_deg = *v;

    if (auto v = take_string(map, "probe", "kind")) {
        if (*v == "ket0")
            s.probe.kind = ProbeKind::ket0;
        else if (*v == "along_x")
            s.probe.kind = ProbeKind::along_x;
        else if (*v == "optimal")
            s.probe.kind = ProbeKind::optimal_superposition;
        else if (*v == "bloch")
            s.probe.kind = ProbeKind::bloch;
        else
            violations.push_back("probe.kind: expected ket0, along_x, optimal or bloch, got '" +
                                 *v + "'");
    }
    if (auto v = take_number(map, "probe", "theta_deg", violations)) s.probe.bloch_theta_deg = *v;
    if (auto v = take_number(map, "probe", "phi_deg", violations)) s.probe.bloch_phi_deg = *v;

    if (auto v = take_number(map, "time", "horizon_s", violations)) s.horizon_s = *v;
    if (auto v = take_number(map, "time", "grid_points", violations))
        s.grid_points = static_cast<int>(*v);

    if (auto v = take_string(map, "integrator", "method")) {
        if (*v == "superop")
            s.settings.method = Method::superop_exact;
        else if (*v == "rk4")
            s.settings.method = Method::rk4;
        else
            violations.push_back("integrator.method: expected superop or rk4, got '" + *v + "'");
    }
    if (auto v = take_number(map, "integrator", "dt_max_s", violations)) s.settings.dt_max = *v;
    if (auto v = take_string(map, "integrator", "richardson")) {
        if (*v == "true" || *v == "1")
            s.settings.richardson_check = true;
        else if (*v == "false" || *v == "0")
            s.settings.richardson_check = false;
        else
            violations.push_back("integrator.richardson: expected true or false, got '" + *v + "'");
    }

    // Anything left over is unknown.
    for (const auto& [section, keys] : map)
        for (const auto& [key, value] : keys)
            violations.push_back("unknown key " + section + "." + key);

    // Whole-config validation.
    if (std::abs(s.q0 + s.q1 - 1.0) > 1e-12 || s.q0 < 0.0 || s.q1 < 0.0)
        violations.push_back("scenario: priors must be nonnegative and sum to 1");
    if (!(s.gamma > 0.0)) violations.push_back("scenario.gamma: must be > 0");
    if (!(s.horizon_s > 0.0)) violations.push_back("time.horizon_s: must be > 0");
    if (s.grid_points < 2) violations.push_back("time.grid_points: must be >= 2");
    if (!(s.settings.dt_max > 0.0)) violations.push_back("integrator.dt_max_s: must be > 0");
    if (s.field0.magnitude_nT < 0.0 || s.field1.magnitude_nT < 0.0)
        violations.push_back("hypothesis: field magnitudes must be >= 0");
    if (std::abs(s.field0.theta_deg) > 180.0 || std::abs(s.field1.theta_deg) > 180.0)
        violations.push_back("hypothesis: theta_deg must lie in [-180, 180]");
    if (s.noise.p_ground < 0.0 || s.noise.p_ground > 1.0)
        violations.push_back("noise.p_ground: must lie in [0, 1]");

    if (!violations.empty()) throw config_error(std::move(violations));
    return cfg;
}

inline RunConfig parse_config(const std::string& text) {
    std::vector<std::string> violations;
    ConfigMap map = cfg_detail::parse_sections(text, violations);
    return build_config(std::move(map), std::move(violations));
}

}  // namespace qht
