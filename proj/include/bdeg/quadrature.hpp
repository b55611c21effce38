#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "bdeg/grid.hpp"

namespace bdeg::quad {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson on [a, b].
template <class F>
double adaptive_simpson(F f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Product rule on the disk B(center, radius): midpoint in r (never touches
/// the center, so integrable point singularities are safe), trapezoid in
/// theta (exact for trigonometric polynomials). Weights sum to pi*radius^2
/// exactly up to roundoff.
struct PolarRule {
    cplx center;
    double radius = 1.0;
    int n_r = 512;
    int n_theta = 256;

    /// Integral of f over the disk.
    template <class F>
    double integrate(F&& f) const {
        const double dr = radius / n_r;
        const double dth = 2.0 * std::numbers::pi / n_theta;
        double acc = 0.0;
        for (int ir = 0; ir < n_r; ++ir) {
            const double r = (ir + 0.5) * dr;
            double ring = 0.0;
            for (int it = 0; it < n_theta; ++it) {
                const double th = it * dth;
                ring += f(center + std::polar(r, th));
            }
            acc += ring * r;
        }
        return acc * dr * dth;
    }
};

/// Deterministic low-discrepancy sequence (van der Corput in the given base).
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv, x = 0.0;
    while (i > 0) {
        x += static_cast<double>(i % base) * f;
        i /= base;
        f *= inv;
    }
    return x;
}

/// k-th Halton point mapped to the open disk B(center, radius), area-uniform.
/// The sequence is deterministic and prefix-stable: the first N points of a
/// 2N-point draw are the N-point draw. `seed` offsets the sequence start.
inline cplx halton_disk_point(std::uint64_t k, cplx center, double radius, std::uint64_t seed) {
    const double u = radical_inverse(k + 1 + seed, 2);
    const double v = radical_inverse(k + 1 + seed, 3);
    const double r = radius * std::sqrt(u);
    const double th = 2.0 * std::numbers::pi * v;
    return center + std::polar(r, th);
}

} // namespace bdeg::quad
