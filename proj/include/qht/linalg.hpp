// Dense complex matrix arithmetic for the 2x2 / 4x4 matrices this library
// lives on, plus a Hermitian eigensolver (analytic for 2x2, cyclic Jacobi
// otherwise), trace norm, and the closed-form 2x2 unitary exp(-iHt).
//
// Eigenvector phase convention, used everywhere: the first component of
// each eigenvector with modulus > 1e-12 is made real and positive. Probe
// construction and the enhancement conditions both depend on it, so it is
// fixed here once.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>

#include "qht/errors.hpp"

namespace qht {

using cplx = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPhaseTol = 1e-12;
inline constexpr double kDegenerateGap = 1e-12;

template <std::size_t N>
struct Matrix {
    std::array<cplx, N * N> e{};

    static constexpr std::size_t dim = N;

    cplx& operator()(std::size_t i, std::size_t j) { return e[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return e[i * N + j]; }

    static Matrix zero() { return Matrix{}; }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) e[k] += o.e[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) e[k] -= o.e[k];
        return *this;
    }
    Matrix& operator*=(cplx c) {
        for (auto& x : e) x *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx c) { return a *= c; }
    friend Matrix operator*(cplx c, Matrix a) { return a *= c; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;

template <std::size_t N>
struct Vector {
    std::array<cplx, N> e{};

    cplx& operator[](std::size_t i) { return e[i]; }
    const cplx& operator[](std::size_t i) const { return e[i]; }
};

using Vec2 = Vector<2>;
using Vec4 = Vector<4>;

template <std::size_t N>
Matrix<N> adjoint(const Matrix<N>& a) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

template <std::size_t N>
Matrix<N> transpose(const Matrix<N>& a) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = a(j, i);
    return r;
}

template <std::size_t N>
Matrix<N> conjugate(const Matrix<N>& a) {
    Matrix<N> r;
    for (std::size_t k = 0; k < N * N; ++k) r.e[k] = std::conj(a.e[k]);
    return r;
}

template <std::size_t N>
Matrix<N> commutator(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b - b * a;
}

template <std::size_t N>
Matrix<N> anticommutator(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b + b * a;
}

template <std::size_t N>
cplx trace(const Matrix<N>& a) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += a(i, i);
    return t;
}

template <std::size_t N>
double norm_max(const Matrix<N>& a) {
    double m = 0.0;
    for (const auto& x : a.e) m = std::max(m, std::abs(x));
    return m;
}

// Maximum absolute row sum; submultiplicative, used to pick the scaling
// depth of the matrix exponential.
template <std::size_t N>
double norm_inf(const Matrix<N>& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

template <std::size_t N>
double hermiticity_defect(const Matrix<N>& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

template <std::size_t N>
bool all_finite(const Matrix<N>& a) {
    for (const auto& x : a.e)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

template <std::size_t N>
Vector<N> operator*(const Matrix<N>& a, const Vector<N>& v) {
    Vector<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// <a|b>, conjugate-linear in the first argument.
template <std::size_t N>
cplx inner(const Vector<N>& a, const Vector<N>& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <std::size_t N>
double norm(const Vector<N>& v) {
    return std::sqrt(std::real(inner(v, v)));
}

// |a><b|
template <std::size_t N>
Matrix<N> outer(const Vector<N>& a, const Vector<N>& b) {
    Matrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = a[i] * std::conj(b[j]);
    return r;
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (std::size_t ia = 0; ia < 2; ++ia)
        for (std::size_t ja = 0; ja < 2; ++ja)
            for (std::size_t ib = 0; ib < 2; ++ib)
                for (std::size_t jb = 0; jb < 2; ++jb)
                    r(2 * ia + ib, 2 * ja + jb) = a(ia, ja) * b(ib, jb);
    return r;
}

// Column stacking: vec(rho)[i + 2j] = rho(i, j), i.e. vec(|i><j|) = e_j (x) e_i.
// All superoperators in this library assume this ordering.
inline Vec4 vec_stack(const Mat2& m) {
    Vec4 v;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) v[2 * j + i] = m(i, j);
    return v;
}

inline Mat2 unvec(const Vec4& v) {
    Mat2 m;
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) m(i, j) = v[2 * j + i];
    return m;
}

inline const Mat2 kSigmaX{{cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)}};
inline const Mat2 kSigmaY{{cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)}};
inline const Mat2 kSigmaZ{{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0)}};

// n . sigma for a real unit 3-vector n.
inline Mat2 sigma_axis(const std::array<double, 3>& n) {
    Mat2 m = kSigmaX * cplx(n[0], 0) + kSigmaY * cplx(n[1], 0) + kSigmaZ * cplx(n[2], 0);
    return m;
}

// Pauli decomposition M = a I + b . sigma of a Hermitian 2x2 matrix.
struct PauliDecomposition {
    double a;
    std::array<double, 3> b;
    double b_norm;
};

inline PauliDecomposition pauli_decompose(const Mat2& m) {
    PauliDecomposition d;
    d.a = 0.5 * std::real(m(0, 0) + m(1, 1));
    d.b = {std::real(m(1, 0)), std::imag(m(1, 0)), 0.5 * std::real(m(0, 0) - m(1, 1))};
    d.b_norm = std::sqrt(d.b[0] * d.b[0] + d.b[1] * d.b[1] + d.b[2] * d.b[2]);
    return d;
}

template <std::size_t N>
struct EigenSystem {
    std::array<double, N> eigenvalues{};  // ascending
    Matrix<N> eigenvectors;               // unit-norm columns, phase-fixed
    bool degenerate = false;              // some gap below kDegenerateGap

    Vector<N> eigenvector(std::size_t k) const {
        Vector<N> v;
        for (std::size_t i = 0; i < N; ++i) v[i] = eigenvectors(i, k);
        return v;
    }
};

namespace detail {

// Rotate each column so its first component of modulus > kPhaseTol is real
// and positive.
template <std::size_t N>
void phase_fix_columns(Matrix<N>& v) {
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t i = 0; i < N; ++i) {
            const cplx x = v(i, k);
            if (std::abs(x) > kPhaseTol) {
                const cplx ph = std::conj(x) / std::abs(x);
                for (std::size_t j = 0; j < N; ++j) v(j, k) *= ph;
                break;
            }
        }
    }
}

inline EigenSystem<2> eig2_analytic(const Mat2& m) {
    EigenSystem<2> es;
    const auto d = pauli_decompose(m);

    es.eigenvalues = {d.a - d.b_norm, d.a + d.b_norm};
    es.degenerate = 2.0 * d.b_norm < kDegenerateGap;
    if (es.degenerate) {
        es.eigenvectors = Mat2::identity();
        return es;
    }

    // Eigenvector of b.sigma with eigenvalue +|b|; branch on the sign of
    // b_z for numerical stability near the poles.
    const cplx bxy(d.b[0], d.b[1]);
    Vec2 vplus;
    if (d.b[2] >= 0.0) {
        vplus[0] = cplx(d.b_norm + d.b[2], 0.0);
        vplus[1] = bxy;
    } else {
        vplus[0] = std::conj(bxy);
        vplus[1] = cplx(d.b_norm - d.b[2], 0.0);
    }
    const double np = norm(vplus);
    vplus[0] /= np;
    vplus[1] /= np;
    // Orthogonal complement is the -|b| eigenvector.
    const Vec2 vminus{-std::conj(vplus[1]), std::conj(vplus[0])};

    es.eigenvectors(0, 0) = vminus[0];
    es.eigenvectors(1, 0) = vminus[1];
    es.eigenvectors(0, 1) = vplus[0];
    es.eigenvectors(1, 1) = vplus[1];
    phase_fix_columns(es.eigenvectors);
    return es;
}

// Cyclic Jacobi for Hermitian matrices of any (small) dimension.
template <std::size_t N>
EigenSystem<N> eig_jacobi(const Matrix<N>& m) {
    Matrix<N> a = m;
    Matrix<N> v = Matrix<N>::identity();
    const double scale = std::max(1.0, norm_max(m));
    const double threshold = 1e-14 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= threshold) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= threshold * 0.01) continue;

                const cplx phase = apq / mag;
                const double app = std::real(a(p, p));
                const double aqq = std::real(a(q, q));
                const double tau = (aqq - app) / (2.0 * mag);
                // Smaller root of t^2 - 2 tau t - 1 = 0 in the rationalized
                // form, stable for large |tau|.
                const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                // Columns p, q of the rotation: J_pp = c, J_pq = -s*phase,
                // J_qp = s*conj(phase), J_qq = c. Apply A <- J^dag A J.
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp + s * std::conj(phase) * akq;
                    a(k, q) = -s * phase * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + s * phase * aqk;
                    a(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp + s * std::conj(phase) * vkq;
                    v(k, q) = -s * phase * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return std::real(a(i, i)) < std::real(a(j, j)); });

    EigenSystem<N> es;
    for (std::size_t k = 0; k < N; ++k) {
        es.eigenvalues[k] = std::real(a(order[k], order[k]));
        for (std::size_t i = 0; i < N; ++i) es.eigenvectors(i, k) = v(i, order[k]);
    }
    for (std::size_t k = 0; k + 1 < N; ++k)
        if (es.eigenvalues[k + 1] - es.eigenvalues[k] < kDegenerateGap) es.degenerate = true;
    phase_fix_columns(es.eigenvectors);
    return es;
}

}  // namespace detail

template <std::size_t N>
EigenSystem<N> hermitian_eig(const Matrix<N>& m) {
    if (!all_finite(m)) throw invalid_argument("hermitian_eig: non-finite entries");
    if (hermiticity_defect(m) > kHermitianTol)
        throw invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");
    if constexpr (N == 2)
        return detail::eig2_analytic(m);
    else
        return detail::eig_jacobi(m);
}

// Sum of |eigenvalue| == sum of singular values for Hermitian input.
template <std::size_t N>
double trace_norm_hermitian(const Matrix<N>& m) {
    const auto es = hermitian_eig(m);
    double s = 0.0;
    for (double lam : es.eigenvalues) s += std::abs(lam);
    return s;
}

template <std::size_t N>
double min_eigenvalue_hermitian(const Matrix<N>& m) {
    return hermitian_eig(m).eigenvalues[0];
}

// exp(-i H t) for Hermitian 2x2 H via the closed form for H = a I + b.sigma:
// exp(-iHt) = e^{-iat} (cos(|b|t) I - i sin(|b|t) (b.sigma)/|b|).
inline Mat2 unitary_2x2(const Mat2& h, double t) {
    if (!all_finite(h) || !std::isfinite(t)) throw invalid_argument("unitary_2x2: non-finite input");
    if (hermiticity_defect(h) > kHermitianTol)
        throw invalid_argument("unitary_2x2: matrix is not Hermitian within tolerance");
    const auto d = pauli_decompose(h);
    const cplx global = std::exp(cplx(0.0, -d.a * t));
    Mat2 u = Mat2::identity() * (global * std::cos(d.b_norm * t));
    if (d.b_norm > 0.0) {
        const cplx f = global * cplx(0.0, -std::sin(d.b_norm * t) / d.b_norm);
        u += (kSigmaX * cplx(d.b[0], 0) + kSigmaY * cplx(d.b[1], 0) + kSigmaZ * cplx(d.b[2], 0)) * f;
    }
    return u;
}

// Scaling-and-squaring matrix exponential: squarings chosen so the scaled
// norm is at most 0.5, then a 12th-order Taylor core.
template <std::size_t N>
Matrix<N> matrix_exp(const Matrix<N>& m) {
    if (!all_finite(m)) throw invalid_argument("matrix_exp: non-finite entries");
    const double nrm = norm_inf(m);
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));

    Matrix<N> t = m;
    t *= cplx(std::ldexp(1.0, -squarings), 0.0);

    Matrix<N> result = Matrix<N>::identity();
    Matrix<N> term = Matrix<N>::identity();
    for (int k = 1; k <= 12; ++k) {
        term = term * t;
        term *= cplx(1.0 / k, 0.0);
        result += term;
    }
    for (int k = 0; k < squarings; ++k) result = result * result;
    return result;
}

}  // namespace qht
