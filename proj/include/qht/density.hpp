// DensityMatrix: a validated 2x2 state. Construction computes the
// diagnostics (hermiticity defect, trace defect, minimum eigenvalue) and
// rejects anything outside tolerance, so downstream code can assume a
// physical state.
#pragma once

#include <array>
#include <sstream>

#include "qht/linalg.hpp"

namespace qht {

inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPositivityTol = 1e-9;

struct DensityMatrix {
    Mat2 rho;
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
};

inline DensityMatrix make_density(const Mat2& raw) {
    DensityMatrix d;
    d.rho = raw;
    d.hermiticity_defect = hermiticity_defect(raw);
    d.trace_defect = std::abs(trace(raw) - cplx(1.0, 0.0));
    if (!all_finite(raw)) throw invalid_argument("density matrix: non-finite entries");
    if (d.hermiticity_defect > kHermitianTol) {
        std::ostringstream os;
        os << "density matrix: hermiticity defect " << d.hermiticity_defect;
        throw invalid_argument(os.str());
    }
    if (d.trace_defect > kTraceTol) {
        std::ostringstream os;
        os << "density matrix: trace defect " << d.trace_defect;
        throw invalid_argument(os.str());
    }
    // Work with the Hermitian part so the eigensolver sees an exactly
    // Hermitian matrix.
    const Mat2 herm = (raw + adjoint(raw)) * cplx(0.5, 0.0);
    d.min_eigenvalue = min_eigenvalue_hermitian(herm);
    if (d.min_eigenvalue < -kPositivityTol) {
        std::ostringstream os;
        os << "density matrix: negative eigenvalue " << d.min_eigenvalue;
        throw invalid_argument(os.str());
    }
    return d;
}

inline std::array<double, 3> bloch_vector(const Mat2& rho) {
    return {std::real(trace(rho * kSigmaX)), std::real(trace(rho * kSigmaY)),
            std::real(trace(rho * kSigmaZ))};
}

inline Mat2 from_bloch(const std::array<double, 3>& r) {
    Mat2 m = Mat2::identity();
    m += kSigmaX * cplx(r[0], 0) + kSigmaY * cplx(r[1], 0) + kSigmaZ * cplx(r[2], 0);
    m *= cplx(0.5, 0.0);
    return m;
}

inline DensityMatrix pure_state(const Vec2& psi) {
    Vec2 v = psi;
    const double n = norm(v);
    if (n <= 0.0) throw invalid_argument("pure_state: zero vector");
    v[0] /= n;
    v[1] /= n;
    return make_density(outer(v, v));
}

}  // namespace qht
