// Time evolution under the Lindblad master equation
//   drho/dt = -i[H, rho] + sum_k ( L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho} )
// via exact exponentiation of the 4x4 Liouvillian (the generators here are
// time independent), with a fixed-step RK4 integrator kept as an
// independent cross-check, plus the closed-form Bloch solution for a
// z-axis field with z-locked noise used as a test oracle.
//
// Superoperators act on column-stacked states, vec(|i><j|) = e_j (x) e_i,
// so A rho B ->  (B^T (x) A) vec(rho).
#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "qht/density.hpp"
#include "qht/linalg.hpp"

namespace qht {

enum class Method { superop_exact, rk4 };

struct PropagationSettings {
    Method method = Method::superop_exact;
    double dt_max = 1e-3;           // rk4 step cap, seconds
    bool richardson_check = false;  // rk4 only: verify against a half-step run
};

struct Liouvillian {
    Mat4 matrix;  // 1/s
};

inline Mat2 lindblad_rhs(const Mat2& rho, const Mat2& h, const std::vector<Mat2>& ls) {
    Mat2 r = commutator(h, rho) * cplx(0.0, -1.0);
    for (const auto& l : ls) {
        const Mat2 ld = adjoint(l);
        r += l * rho * ld;
        r -= anticommutator(ld * l, rho) * cplx(0.5, 0.0);
    }
    return r;
}

inline Liouvillian build_liouvillian(const Mat2& h, const std::vector<Mat2>& ls) {
    const Mat2 id = Mat2::identity();
    Mat4 m = (kron(id, h) - kron(transpose(h), id)) * cplx(0.0, -1.0);
    for (const auto& l : ls) {
        const Mat2 ldl = adjoint(l) * l;
        m += kron(conjugate(l), l);
        m -= (kron(id, ldl) + kron(transpose(ldl), id)) * cplx(0.5, 0.0);
    }
    return Liouvillian{m};
}

namespace detail {

inline Mat2 hermitian_part(const Mat2& m) { return (m + adjoint(m)) * cplx(0.5, 0.0); }

// Conservative stiffness scale for the rk4 step cap: Hamiltonian spectral
// gap plus total jump-rate weight.
inline double rate_scale(const Mat2& h, const std::vector<Mat2>& ls) {
    const auto d = pauli_decompose(hermitian_part(h));
    double s = 2.0 * d.b_norm;
    for (const auto& l : ls) {
        double fro2 = 0.0;
        for (const auto& x : l.e) fro2 += std::norm(x);
        s += 4.0 * fro2;
    }
    return std::max(s, 1e-6);
}

inline Mat2 rk4_integrate(Mat2 rho, const Mat2& h, const std::vector<Mat2>& ls, double t,
                          double dt_max) {
    if (t <= 0.0) return rho;
    const double cap = std::min(dt_max, 0.05 / rate_scale(h, ls));
    const long n = std::max(1L, static_cast<long>(std::ceil(t / cap)));
    const double dt = t / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        const Mat2 k1 = lindblad_rhs(rho, h, ls);
        const Mat2 k2 = lindblad_rhs(rho + k1 * cplx(dt / 2.0, 0), h, ls);
        const Mat2 k3 = lindblad_rhs(rho + k2 * cplx(dt / 2.0, 0), h, ls);
        const Mat2 k4 = lindblad_rhs(rho + k3 * cplx(dt, 0), h, ls);
        rho += (k1 + k2 * cplx(2, 0) + k3 * cplx(2, 0) + k4) * cplx(dt / 6.0, 0);
    }
    return rho;
}

// Hermitize and renormalize the trace (both drift only at roundoff level),
// then enforce the positivity tolerance.
inline DensityMatrix finalize_state(const Mat2& raw, double t) {
    Mat2 rho = hermitian_part(raw);
    const double tr = std::real(trace(rho));
    if (std::abs(tr - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "propagation lost trace normalization: tr=" << tr << " at t=" << t;
        throw numerical_failure(os.str());
    }
    rho *= cplx(1.0 / tr, 0.0);
    const double mineig = min_eigenvalue_hermitian(rho);
    if (mineig < -1e-7) {
        std::ostringstream os;
        os << "propagation violated positivity: min eigenvalue " << mineig << " at t=" << t;
        throw numerical_failure(os.str());
    }
    return make_density(rho);
}

}  // namespace detail

inline DensityMatrix evolve(const DensityMatrix& rho0, const Mat2& h, const std::vector<Mat2>& ls,
                            double t, const PropagationSettings& settings = {}) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw invalid_argument("evolve: t must be finite and >= 0");
    if (!(settings.dt_max > 0.0)) throw invalid_argument("evolve: dt_max must be > 0");
    if (t == 0.0) return rho0;

    Mat2 raw;
    if (settings.method == Method::superop_exact) {
        const Liouvillian liou = build_liouvillian(h, ls);
        const Mat4 propagator = matrix_exp(liou.matrix * cplx(t, 0.0));
        raw = unvec(propagator * vec_stack(rho0.rho));
    } else {
        raw = detail::rk4_integrate(rho0.rho, h, ls, t, settings.dt_max);
        if (settings.richardson_check) {
            const Mat2 fine = detail::rk4_integrate(rho0.rho, h, ls, t, settings.dt_max / 2.0);
            if (norm_max(raw - fine) > 1e-6) {
                std::ostringstream os;
                os << "rk4 step-halving check failed: deviation " << norm_max(raw - fine)
                   << " at t=" << t;
                throw numerical_failure(os.str());
            }
        }
    }
    return detail::finalize_state(raw, t);
}

inline DensityMatrix evolve_unitary(const DensityMatrix& rho0, const Mat2& h, double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw invalid_argument("evolve_unitary: t must be finite and >= 0");
    const Mat2 u = unitary_2x2(h, t);
    return make_density(u * rho0.rho * adjoint(u));
}

// Closed-form Bloch solution for a z-axis field with z-locked noise:
// transverse components precess at omega (signed; r_x + i r_y gains
// e^{i omega t}) and decay at 1/T2, the longitudinal component relaxes at
// 1/T1 toward r_eq = 2 p_ground - 1. For a field B along +z with
// H = -gamma B sigma_z / 2, the precession rate to pass is
// omega = -gamma*B*1e-9.
inline std::array<double, 3> bloch_oracle_zfield(const std::array<double, 3>& r0, double omega,
                                                 double T1, double T2, double p_ground, double t) {
    if (!(T1 > 0.0) || !(T2 > 0.0)) throw invalid_argument("bloch_oracle_zfield: T1, T2 must be > 0");
    const cplx xy = cplx(r0[0], r0[1]) * std::exp(cplx(-t / T2, omega * t));
    const double r_eq = 2.0 * p_ground - 1.0;
    const double z = r_eq + (r0[2] - r_eq) * std::exp(-t / T1);
    return {xy.real(), xy.imag(), z};
}

// Propagate one state across a uniform time grid (starting at 0 or at one
// grid spacing) by repeated application of the single-step propagator
// exp(L dt); exact up to roundoff for the time-independent generators used
// throughout.
inline std::vector<Mat2> propagate_grid(const Mat2& rho0, const Mat2& h, const std::vector<Mat2>& ls,
                                        const std::vector<double>& times,
                                        const PropagationSettings& settings = {}) {
    std::vector<Mat2> out;
    out.reserve(times.size());
    if (times.empty()) return out;

    const double spacing = times.size() > 1 ? times[1] - times[0] : times[0];
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (std::abs((times[k + 1] - times[k]) - spacing) > 1e-9 * std::max(1.0, spacing))
            throw invalid_argument("propagate_grid: time grid must be uniform");
    if (!(times[0] == 0.0 || std::abs(times[0] - spacing) <= 1e-9 * std::max(1.0, spacing)))
        throw invalid_argument("propagate_grid: grid must start at 0 or at one spacing");

    if (settings.method == Method::rk4) {
        Mat2 rho = rho0;
        double t_prev = 0.0;
        for (double t : times) {
            rho = detail::rk4_integrate(rho, h, ls, t - t_prev, settings.dt_max);
            t_prev = t;
            out.push_back(detail::hermitian_part(rho));
        }
        return out;
    }

    const Liouvillian liou = build_liouvillian(h, ls);
    const Mat4 step = matrix_exp(liou.matrix * cplx(spacing, 0.0));
    Vec4 v = vec_stack(rho0);
    double t_prev = 0.0;
    for (double t : times) {
        if (t > t_prev) {
            v = step * v;
            t_prev = t;
        }
        out.push_back(detail::hermitian_part(unvec(v)));
    }
    return out;
}

}  // namespace qht
