// Test-only oracles, kept independent of the library paths they check:
// brute-force quadrature and closed forms used to freeze expected values.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracles {

using cplx = std::complex<double>;

/// High-resolution polar quadrature over the disk B(0, radius); midpoint in
/// r, uniform in theta. Independent of the library's grid quadrature.
inline double polar_integral(const std::function<double(cplx)>& f, double radius,
                             int n_r = 4000, int n_theta = 512) {
    const double dr = radius / n_r;
    const double dth = 2.0 * std::numbers::pi / n_theta;
    double acc = 0.0;
    for (int ir = 0; ir < n_r; ++ir) {
        const double r = (ir + 0.5) * dr;
        double ring = 0.0;
        for (int it = 0; it < n_theta; ++it) ring += f(std::polar(r, it * dth));
        acc += ring * r;
    }
    return acc * dr * dth;
}

/// Composite Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4096) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Gaussian bump used as the standard smooth periodic test field on [-2,2)^2.
struct Gaussian {
    double sigma = 0.3;
    double operator()(cplx z) const { return std::exp(-std::norm(z) / (2.0 * sigma * sigma)); }
    cplx value(cplx z) const { return {(*this)(z), 0.0}; }
    cplx dz(cplx z) const { return -std::conj(z) / (2.0 * sigma * sigma) * (*this)(z); }
    cplx dzbar(cplx z) const { return -z / (2.0 * sigma * sigma) * (*this)(z); }
};

} // namespace oracles
