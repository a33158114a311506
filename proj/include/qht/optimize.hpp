// One-dimensional golden-section minimization on a bracket.
#pragma once

#include <cmath>
#include <utility>

namespace qht {

// Returns (argmin, min). Shrinks [a, b] until b - a < xtol.
template <typename F>
std::pair<double, double> golden_section_min(F f, double a, double b, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - (b - a) * invphi;
    double d = a + (b - a) * invphi;
    double fc = f(c);
    double fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d);
        }
    }
    return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace qht
