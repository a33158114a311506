// Physical model: magnetic-field specs, noise specs, the T1/T2 <-> rate
// mapping, and construction of the Hamiltonian and Lindblad operators of
// one hypothesis.
//
// Units: field magnitudes in nT at every interface, angular frequencies in
// rad/s internally. The nT -> T conversion happens only inside
// build_hamiltonian. Angles are degrees at interfaces.
//
// Conventions: a field of magnitude B along unit axis n gives
// H = -gamma B sigma_n / 2, so for gamma B > 0 the ground state (lowest
// energy) is the +1 eigenvector of sigma_n. Dephasing acts along the noise
// axis, damping lowers toward the ground state with steady ground-state
// population p.
#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "qht/density.hpp"
#include "qht/linalg.hpp"

namespace qht {

// Proton gyromagnetic ratio, rad s^-1 T^-1 (CODATA).
inline constexpr double kProtonGamma = 2.6752218744e8;

inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

struct FieldSpec {
    double magnitude_nT = 0.0;
    double theta_deg = 90.0;  // field direction (cos theta, 0, sin theta)
};

enum class AxisBinding {
    hamiltonian_locked,  // noise axis follows the hypothesis's total field
    fixed_axis,          // both hypotheses share fixed_theta_deg
};

struct NoiseSpec {
    double kappa1 = 0.0;    // dephasing rate, 1/s
    double kappa2 = 0.0;    // damping rate, 1/s
    double p_ground = 0.5;  // steady-state ground population
    AxisBinding binding = AxisBinding::hamiltonian_locked;
    double fixed_theta_deg = 90.0;
};

struct Hypothesis {
    FieldSpec field;
    Mat2 hamiltonian;                // rad/s
    std::array<double, 3> noise_axis{};
    std::vector<Mat2> lindblad_ops;  // units sqrt(1/s)
    Vec2 ground, excited;
};

inline void validate_field(const FieldSpec& f) {
    if (!(f.magnitude_nT >= 0.0)) throw invalid_argument("field: magnitude must be >= 0");
    if (!(f.theta_deg >= -180.0 && f.theta_deg <= 180.0))
        throw invalid_argument("field: theta_deg must lie in [-180, 180]");
}

inline void validate_noise(const NoiseSpec& n) {
    if (!(n.kappa1 >= 0.0) || !(n.kappa2 >= 0.0))
        throw invalid_argument("noise: rates must be >= 0");
    if (!(n.p_ground >= 0.0 && n.p_ground <= 1.0))
        throw invalid_argument("noise: p_ground must lie in [0, 1]");
}

// T1 = 1/kappa2, T2 = 2/(4 kappa1 + kappa2).
inline std::array<double, 2> rates_to_times(double kappa1, double kappa2) {
    if (!(kappa2 > 0.0)) throw invalid_argument("rates_to_times: kappa2 must be > 0");
    if (!(kappa1 >= 0.0)) throw invalid_argument("rates_to_times: kappa1 must be >= 0");
    return {1.0 / kappa2, 2.0 / (4.0 * kappa1 + kappa2)};
}

inline std::array<double, 2> times_to_rates(double T1, double T2) {
    if (!(T1 > 0.0) || !(T2 > 0.0)) throw invalid_argument("times_to_rates: T1, T2 must be > 0");
    if (T2 > 2.0 * T1) {
        std::ostringstream os;
        os << "times_to_rates: T2=" << T2 << " exceeds the physical bound T2 <= 2*T1 = " << 2.0 * T1
           << " (would need kappa1 < 0)";
        throw unphysical_noise(os.str());
    }
    const double kappa2 = 1.0 / T1;
    const double kappa1 = (2.0 / T2 - kappa2) / 4.0;
    return {std::max(kappa1, 0.0), kappa2};
}

// H = -gamma * 1e-9 * (B (cos th sigma_x + sin th sigma_z) + Bc sigma_x) / 2
inline Mat2 build_hamiltonian(const FieldSpec& field, double control_Bc_nT, double gamma) {
    validate_field(field);
    if (!(gamma > 0.0)) throw invalid_argument("build_hamiltonian: gamma must be > 0");
    const double th = field.theta_deg * kDegToRad;
    const double bx = field.magnitude_nT * std::cos(th) + control_Bc_nT;
    const double bz = field.magnitude_nT * std::sin(th);
    const double f = -gamma * 1e-9 * 0.5;
    return kSigmaX * cplx(f * bx, 0) + kSigmaZ * cplx(f * bz, 0);
}

// Unit vector along the total field (control adds along x).
inline std::array<double, 3> effective_axis(const FieldSpec& field, double control_Bc_nT) {
    validate_field(field);
    const double th = field.theta_deg * kDegToRad;
    const double bx = field.magnitude_nT * std::cos(th) + control_Bc_nT;
    const double bz = field.magnitude_nT * std::sin(th);
    const double n = std::sqrt(bx * bx + bz * bz);
    if (n <= 0.0) throw degenerate_axis("effective_axis: zero total field");
    return {bx / n, 0.0, bz / n};
}

// Ground (+1 eigenvector of sigma_n) and excited (-1) states of a field
// along an xz-plane axis, phase-fixed. The theta = 90 degeneracy of the
// closed form is handled by the eigensolver limit.
inline std::pair<Vec2, Vec2> ground_excited(const std::array<double, 3>& axis) {
    if (std::abs(axis[1]) > 1e-12)
        throw invalid_argument("ground_excited: axis must lie in the xz-plane");
    const double n = std::sqrt(axis[0] * axis[0] + axis[2] * axis[2]);
    if (std::abs(n - 1.0) > 1e-9) throw invalid_argument("ground_excited: axis must be unit length");
    const auto es = hermitian_eig(sigma_axis(axis));
    return {es.eigenvector(1), es.eigenvector(0)};
}

// [sqrt(kappa1) sigma_n, sqrt(kappa2 p) |g><e|, sqrt(kappa2 (1-p)) |e><g|];
// zero-rate channels are kept as zero matrices so the list shape is stable.
inline std::vector<Mat2> lindblad_ops(const std::array<double, 3>& axis, const NoiseSpec& noise) {
    validate_noise(noise);
    const auto [g, e] = ground_excited(axis);
    std::vector<Mat2> ops;
    ops.push_back(sigma_axis(axis) * cplx(std::sqrt(noise.kappa1), 0));
    ops.push_back(outer(g, e) * cplx(std::sqrt(noise.kappa2 * noise.p_ground), 0));
    ops.push_back(outer(e, g) * cplx(std::sqrt(noise.kappa2 * (1.0 - noise.p_ground)), 0));
    return ops;
}

inline std::array<double, 3> noise_axis_for(const FieldSpec& field, double control_Bc_nT,
                                            const NoiseSpec& noise) {
    if (noise.binding == AxisBinding::hamiltonian_locked) return effective_axis(field, control_Bc_nT);
    const double th = noise.fixed_theta_deg * kDegToRad;
    return {std::cos(th), 0.0, std::sin(th)};
}

inline Hypothesis make_hypothesis(const FieldSpec& field, double control_Bc_nT, double gamma,
                                  const NoiseSpec& noise) {
    Hypothesis h;
    h.field = field;
    h.hamiltonian = build_hamiltonian(field, control_Bc_nT, gamma);
    h.noise_axis = noise_axis_for(field, control_Bc_nT, noise);
    auto ge = ground_excited(h.noise_axis);
    h.ground = ge.first;
    h.excited = ge.second;
    h.lindblad_ops = lindblad_ops(h.noise_axis, noise);
    return h;
}

}  // namespace qht
