// Hypothesis-testing analytics: probe states, the Helstrom success
// probability, success curves under noisy vs unitary dynamics, the
// sufficient enhancement conditions, the enhancement metric eta, the
// strong-dephasing limit, and the quantum Chernoff exponent.
//
// Two unitary references appear here and must not be confused:
//  - p_unitary(t): the same probe evolved under the same Hamiltonians with
//    the noise switched off (the "without noise" curve); eta is the best
//    pointwise advantage of the noisy curve over it.
//  - unitary_ceiling(t): the best success probability ANY unitary protocol
//    (optimal probe, measuring at the best time <= t) can reach by time t,
//    (1 + sin(min(dLambda t / 2, pi/2))) / 2 where dLambda is the spectral
//    spread of H1 - H0. exceeds_unitary_max reports whether the noisy
//    curve ever beats this ceiling, which is the meaningful statement of
//    noise outperforming unitary dynamics.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qht/density.hpp"
#include "qht/linalg.hpp"
#include "qht/model.hpp"
#include "qht/optimize.hpp"
#include "qht/propagator.hpp"

namespace qht {

inline constexpr double kConditionSlack = 1e-12;
inline constexpr double kExceedSlack = 1e-9;

enum class ProbeKind { ket0, along_x, optimal_superposition, bloch };

struct ProbeSpec {
    ProbeKind kind = ProbeKind::ket0;
    double bloch_theta_deg = 0.0;  // polar angle from +z
    double bloch_phi_deg = 0.0;    // azimuth from +x
};

struct Scenario {
    double q0 = 0.5, q1 = 0.5;
    double gamma = kProtonGamma;
    FieldSpec field0, field1;
    double control_Bc_nT = 0.0;
    NoiseSpec noise;
    ProbeSpec probe;
    double horizon_s = 20.0;
    int grid_points = 400;
    PropagationSettings settings;
};

inline void validate_scenario(const Scenario& s) {
    if (std::abs(s.q0 + s.q1 - 1.0) > 1e-12 || s.q0 < 0.0 || s.q1 < 0.0)
        throw invalid_argument("scenario: priors must be nonnegative and sum to 1");
    if (!(s.horizon_s > 0.0)) throw invalid_argument("scenario: horizon must be > 0");
    if (s.grid_points < 2) throw invalid_argument("scenario: grid_points must be >= 2");
    validate_field(s.field0);
    validate_field(s.field1);
    validate_noise(s.noise);
}

inline Hypothesis hypothesis0(const Scenario& s) {
    return make_hypothesis(s.field0, s.control_Bc_nT, s.gamma, s.noise);
}
inline Hypothesis hypothesis1(const Scenario& s) {
    return make_hypothesis(s.field1, s.control_Bc_nT, s.gamma, s.noise);
}

// Spectral spread of H1 - H0 (rad/s) and its phase-fixed extreme
// eigenvectors; degenerate spread invalidates the optimal probe.
struct DifferenceSpectrum {
    double lambda_min, lambda_max;
    Vec2 v_min, v_max;
};

inline DifferenceSpectrum difference_spectrum(const Mat2& h0, const Mat2& h1) {
    const auto es = hermitian_eig(h1 - h0);
    return {es.eigenvalues[0], es.eigenvalues[1], es.eigenvector(0), es.eigenvector(1)};
}

inline DensityMatrix probe_state(const ProbeSpec& spec, const Mat2& h0, const Mat2& h1) {
    switch (spec.kind) {
        case ProbeKind::ket0:
            return pure_state(Vec2{cplx(1, 0), cplx(0, 0)});
        case ProbeKind::along_x:
            return pure_state(Vec2{cplx(1, 0), cplx(1, 0)});
        case ProbeKind::bloch: {
            const double th = spec.bloch_theta_deg * kDegToRad;
            const double ph = spec.bloch_phi_deg * kDegToRad;
            return make_density(from_bloch(
                {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}));
        }
        case ProbeKind::optimal_superposition: {
            const auto ds = difference_spectrum(h0, h1);
            if (ds.lambda_max - ds.lambda_min < 1e-12)
                throw degenerate_hypotheses(
                    "probe_state: H1 - H0 is degenerate, optimal superposition undefined");
            return pure_state(Vec2{ds.v_max[0] + ds.v_min[0], ds.v_max[1] + ds.v_min[1]});
        }
    }
    throw invalid_argument("probe_state: unknown probe kind");
}

// Helstrom bound (1 + || q0 rho0 - q1 rho1 ||_tr) / 2.
inline double success_probability(const DensityMatrix& rho0, const DensityMatrix& rho1, double q0,
                                  double q1) {
    if (!(q0 >= 0.0) || !(q1 >= 0.0) || std::abs(q0 + q1 - 1.0) > 1e-12)
        throw invalid_argument("success_probability: priors must be nonnegative and sum to 1");
    const Mat2 m = rho0.rho * cplx(q0, 0) - rho1.rho * cplx(q1, 0);
    return 0.5 * (1.0 + trace_norm_hermitian(m));
}

inline std::vector<double> time_grid(double horizon, int points) {
    std::vector<double> t(points);
    for (int k = 0; k < points; ++k)
        t[k] = horizon * static_cast<double>(k) / static_cast<double>(points - 1);
    return t;
}

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> p_noisy, p_unitary;
    std::vector<double> trace_distance_noisy, trace_distance_unitary;
    std::string fingerprint;
};

inline std::string scenario_fingerprint(const Scenario& s) {
    std::ostringstream os;
    os.precision(17);
    os << "q0=" << s.q0 << ";gamma=" << s.gamma << ";B0=" << s.field0.magnitude_nT << "@"
       << s.field0.theta_deg << ";B1=" << s.field1.magnitude_nT << "@" << s.field1.theta_deg
       << ";Bc=" << s.control_Bc_nT << ";k1=" << s.noise.kappa1 << ";k2=" << s.noise.kappa2
       << ";p=" << s.noise.p_ground
       << ";bind=" << (s.noise.binding == AxisBinding::hamiltonian_locked ? "locked" : "fixed")
       << ";probe=" << static_cast<int>(s.probe.kind) << ";T=" << s.horizon_s
       << ";n=" << s.grid_points;
    return os.str();
}

inline TimeSeries success_curve(const Scenario& s) {
    validate_scenario(s);
    const Hypothesis hyp0 = hypothesis0(s);
    const Hypothesis hyp1 = hypothesis1(s);
    const DensityMatrix probe = probe_state(s.probe, hyp0.hamiltonian, hyp1.hamiltonian);

    TimeSeries ts;
    ts.times = time_grid(s.horizon_s, s.grid_points);
    ts.fingerprint = scenario_fingerprint(s);
    const auto noisy0 = propagate_grid(probe.rho, hyp0.hamiltonian, hyp0.lindblad_ops, ts.times,
                                       s.settings);
    const auto noisy1 = propagate_grid(probe.rho, hyp1.hamiltonian, hyp1.lindblad_ops, ts.times,
                                       s.settings);

    ts.p_noisy.reserve(ts.times.size());
    ts.p_unitary.reserve(ts.times.size());
    for (std::size_t k = 0; k < ts.times.size(); ++k) {
        const double t = ts.times[k];
        const DensityMatrix r0 = make_density(noisy0[k]);
        const DensityMatrix r1 = make_density(noisy1[k]);
        const DensityMatrix u0 = evolve_unitary(probe, hyp0.hamiltonian, t);
        const DensityMatrix u1 = evolve_unitary(probe, hyp1.hamiltonian, t);
        const double dn = trace_norm_hermitian(r0.rho * cplx(s.q0, 0) - r1.rho * cplx(s.q1, 0));
        const double du = trace_norm_hermitian(u0.rho * cplx(s.q0, 0) - u1.rho * cplx(s.q1, 0));
        ts.trace_distance_noisy.push_back(dn);
        ts.trace_distance_unitary.push_back(du);
        ts.p_noisy.push_back(0.5 * (1.0 + dn));
        ts.p_unitary.push_back(0.5 * (1.0 + du));
    }
    return ts;
}

// Best success probability any unitary protocol reaches by time t: ramp
// (1 + sin(dLambda t / 2)) / 2 of the optimal probe, saturating at 1 once
// perfect discrimination is reachable.
inline double unitary_ceiling(double delta_lambda, double t) {
    const double x = std::min(0.5 * delta_lambda * t, 1.5707963267948966);
    return 0.5 * (1.0 + std::sin(x));
}

// Max over a dense grid of p_unitary with the scenario's probe; the grid is
// doubled until the max moves by less than 1e-4.
inline double unitary_max(const Scenario& s, double horizon, int grid_points) {
    validate_scenario(s);
    if (!(horizon > 0.0)) throw invalid_argument("unitary_max: horizon must be > 0");
    const Hypothesis hyp0 = hypothesis0(s);
    const Hypothesis hyp1 = hypothesis1(s);
    const DensityMatrix probe = probe_state(s.probe, hyp0.hamiltonian, hyp1.hamiltonian);

    auto grid_max = [&](int n) {
        double best = 0.0;
        for (int k = 0; k < n; ++k) {
            const double t = horizon * static_cast<double>(k) / static_cast<double>(n - 1);
            const DensityMatrix u0 = evolve_unitary(probe, hyp0.hamiltonian, t);
            const DensityMatrix u1 = evolve_unitary(probe, hyp1.hamiltonian, t);
            best = std::max(best, success_probability(u0, u1, s.q0, s.q1));
        }
        return best;
    };

    int n = std::max(grid_points, 2);
    double best = grid_max(n);
    for (int iter = 0; iter < 6; ++iter) {
        n = 2 * n - 1;
        const double refined = grid_max(n);
        const bool converged = std::abs(refined - best) < 1e-4;
        best = std::max(best, refined);
        if (converged) break;
    }
    return best;
}

struct ConditionReport {
    double x1 = 0.0, y1 = 0.0, z1 = 0.0, w1 = 0.0;  // 1/s
    double lambda_max = 0.0, lambda_min = 0.0;      // rad/s
    bool cond1 = false, cond2 = false;
    bool near_boundary = false;
    bool degenerate = false;
};

// Dissipative part of the master equation applied to one state.
inline Mat2 dissipator(const std::vector<Mat2>& ls, const Mat2& rho) {
    Mat2 n = Mat2::zero();
    for (const auto& l : ls) {
        const Mat2 ld = adjoint(l);
        n += l * rho * ld;
        n -= anticommutator(ld * l, rho) * cplx(0.5, 0.0);
    }
    return n;
}

// Evaluates the sufficient enhancement conditions for the optimal probe
// (|lmax> + |lmin>)/sqrt(2) of H1 - H0:
//   |x1 + w1| > lmax - lmin
//   (w1 - x1)^2 + 4 y1^2 + 4 z1^2 > 4 z1 (lmax - lmin)
// with x1 = <lmax|N1-N0|lmax>, y1 + i z1 = <lmax|N1-N0|lmin>,
// w1 = <lmin|N1-N0|lmin>, N_j the dissipator of hypothesis j applied to
// the probe projector. Strict inequalities with a small slack; boundary
// cases report false and set near_boundary.
inline ConditionReport check_conditions(const Scenario& s) {
    validate_scenario(s);
    const Hypothesis hyp0 = hypothesis0(s);
    const Hypothesis hyp1 = hypothesis1(s);
    const auto ds = difference_spectrum(hyp0.hamiltonian, hyp1.hamiltonian);

    ConditionReport rep;
    rep.lambda_max = ds.lambda_max;
    rep.lambda_min = ds.lambda_min;
    const double gap = ds.lambda_max - ds.lambda_min;
    if (gap < 1e-12) {
        rep.degenerate = true;
        throw degenerate_hypotheses("check_conditions: H1 - H0 is degenerate");
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Vec2 psi{(ds.v_max[0] + ds.v_min[0]) * inv_sqrt2, (ds.v_max[1] + ds.v_min[1]) * inv_sqrt2};
    const Mat2 proj = outer(psi, psi);

    const Mat2 dn = dissipator(hyp1.lindblad_ops, proj) - dissipator(hyp0.lindblad_ops, proj);
    rep.x1 = std::real(inner(ds.v_max, dn * ds.v_max));
    const cplx offdiag = inner(ds.v_max, dn * ds.v_min);
    rep.y1 = offdiag.real();
    rep.z1 = offdiag.imag();
    rep.w1 = std::real(inner(ds.v_min, dn * ds.v_min));

    const double lhs1 = std::abs(rep.x1 + rep.w1);
    const double lhs2 = (rep.w1 - rep.x1) * (rep.w1 - rep.x1) + 4.0 * rep.y1 * rep.y1 +
                        4.0 * rep.z1 * rep.z1;
    const double rhs2 = 4.0 * rep.z1 * gap;
    rep.cond1 = lhs1 > gap + kConditionSlack;
    rep.cond2 = lhs2 > rhs2 + kConditionSlack;
    rep.near_boundary =
        std::abs(lhs1 - gap) <= kConditionSlack || std::abs(lhs2 - rhs2) <= kConditionSlack;
    return rep;
}

struct EnhancementReport {
    double eta = 0.0;    // max_t (p_noisy - p_unitary), may be negative
    double t_star = 0.0; // grid time attaining it
    bool exceeds_unitary_max = false;  // noisy curve beats the unitary ceiling somewhere
    double p_noisy_max = 0.0;
    double unitary_max_value = 0.0;  // max of the same-probe unitary curve
};

inline EnhancementReport enhancement_from_series(const TimeSeries& ts, double delta_lambda) {
    EnhancementReport rep;
    rep.eta = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ts.times.size(); ++k) {
        const double diff = ts.p_noisy[k] - ts.p_unitary[k];
        if (diff > rep.eta) {
            rep.eta = diff;
            rep.t_star = ts.times[k];
        }
        rep.p_noisy_max = std::max(rep.p_noisy_max, ts.p_noisy[k]);
        rep.unitary_max_value = std::max(rep.unitary_max_value, ts.p_unitary[k]);
        if (ts.p_noisy[k] > unitary_ceiling(delta_lambda, ts.times[k]) + kExceedSlack)
            rep.exceeds_unitary_max = true;
    }
    return rep;
}

inline EnhancementReport enhancement_eta(const Scenario& s) {
    const TimeSeries ts = success_curve(s);
    const auto ds = difference_spectrum(hypothesis0(s).hamiltonian, hypothesis1(s).hamiltonian);
    return enhancement_from_series(ts, ds.lambda_max - ds.lambda_min);
}

// p = 1/2 + 1/4 |sin(theta0 - theta1)|: the success probability once strong
// dephasing has projected the probe onto each hypothesis's field axis.
inline double strong_dephasing_limit(double theta0_deg, double theta1_deg) {
    return 0.5 + 0.25 * std::abs(std::sin((theta0_deg - theta1_deg) * kDegToRad));
}

struct ChernoffResult {
    double s_star = 0.5;
    double q_star = 1.0;
    double exponent = 0.0;  // -ln q_star; +inf sentinel when q_star < 1e-15
};

namespace detail {

// rho^s by spectral calculus with 0^0 := 0; eigenvalues in [-1e-9, 0) are
// clipped to 0 (allowed for Chernoff powers only), and eigenvalues at
// roundoff scale are treated as exact zeros so pure states do not pick up
// spurious lambda^s contributions of order sqrt(eps).
struct SpectralState {
    EigenSystem<2> es;
    std::array<double, 2> lam;
};

inline SpectralState spectral_state(const DensityMatrix& rho) {
    SpectralState st;
    st.es = hermitian_eig((rho.rho + adjoint(rho.rho)) * cplx(0.5, 0.0));
    for (int i = 0; i < 2; ++i)
        st.lam[i] = st.es.eigenvalues[i] < 1e-14 ? 0.0 : st.es.eigenvalues[i];
    return st;
}

inline Mat2 spectral_power(const SpectralState& st, double s) {
    auto pw = [&](double lam) { return lam > 0.0 ? std::pow(lam, s) : 0.0; };
    const Mat2 p0 = outer(st.es.eigenvector(0), st.es.eigenvector(0));
    const Mat2 p1 = outer(st.es.eigenvector(1), st.es.eigenvector(1));
    return p0 * cplx(pw(st.lam[0]), 0) + p1 * cplx(pw(st.lam[1]), 0);
}

}  // namespace detail

// Quantum Chernoff quantity Q(s) = Tr(rho0^s rho1^{1-s}) minimized over
// s in [0, 1]: 101-point grid scan seeding a golden-section refinement.
inline ChernoffResult chernoff(const DensityMatrix& rho0, const DensityMatrix& rho1) {
    const auto st0 = detail::spectral_state(rho0);
    const auto st1 = detail::spectral_state(rho1);

    auto q = [&](double s) {
        const Mat2 prod = detail::spectral_power(st0, s) * detail::spectral_power(st1, 1.0 - s);
        return std::max(0.0, std::real(trace(prod)));
    };

    double best_s = 0.0;
    double best_q = q(0.0);
    for (int k = 1; k <= 100; ++k) {
        const double s = k / 100.0;
        const double v = q(s);
        if (v < best_q) {
            best_q = v;
            best_s = s;
        }
    }

    const double lo = std::max(0.0, best_s - 0.01);
    const double hi = std::min(1.0, best_s + 0.01);
    const auto [s_ref, q_ref] = golden_section_min(q, lo, hi, 1e-6);

    ChernoffResult res;
    if (q_ref < best_q) {
        res.s_star = s_ref;
        res.q_star = q_ref;
    } else {
        res.s_star = best_s;
        res.q_star = best_q;
    }
    res.exponent = res.q_star < 1e-15 ? std::numeric_limits<double>::infinity()
                                      : -std::log(res.q_star);
    if (res.exponent == 0.0) res.exponent = 0.0;  // normalize -0
    return res;
}

}  // namespace qht
