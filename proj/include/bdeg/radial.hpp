#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bdeg/grid.hpp"

namespace bdeg {

/// Radius profile rho of a rotationally covariant map f = (z/|z|) rho(|z|),
/// tabulated on a fine mesh of [r_lo, 1]. Below r_lo the map continues as
/// the conformal linear scaling rho(r_lo) * r / r_lo.
struct RadialProfile {
    std::vector<double> r;    // ascending, r.back() == 1
    std::vector<double> rho;  // rho.back() == 1
    bool degenerate = false;  // |nu| reached 1 before r_min
    double degeneracy_radius = 0.0;

    double r_lo() const { return r.front(); }

    double eval(double rr) const {
        if (rr <= 0.0) return 0.0;
        if (rr <= r.front()) return rho.front() * rr / r.front();
        if (rr >= r.back()) return rho.back();
        // uniform mesh lookup
        const double h = (r.back() - r.front()) / (r.size() - 1);
        auto k = static_cast<std::size_t>((rr - r.front()) / h);
        if (k >= r.size() - 1) k = r.size() - 2;
        const double t = (rr - r[k]) / (r[k + 1] - r[k]);
        return rho[k] * (1.0 - t) + rho[k + 1] * t;
    }
};

struct RadialSolveOptions {
    double step = 1e-4;
    double r_min = 1e-3;
    double degeneracy_tol = 1e-12;  // stop when |nu| >= 1 - tol
};

/// Integrates rho'(r) = rho (1 + nu) / (r (1 - nu)) inward from rho(1) = 1
/// with classical RK4. This is the one-dimensional route to the same maps
/// the spectral solver produces for rotationally covariant coefficients,
/// kept independent of it on purpose.
inline RadialProfile solve_radial_profile(const std::function<double(double)>& nu,
                                          const RadialSolveOptions& opt = {}) {
    if (!(opt.step > 0.0) || !(opt.r_min > 0.0) || opt.r_min >= 1.0)
        throw std::invalid_argument("solve_radial_profile: bad step or r_min");

    bool degenerate = false;
    double degeneracy_radius = 0.0;
    auto slope = [&](double r, double y) {
        const double v = nu(r);
        if (std::abs(v) > 1.0)
            throw std::invalid_argument("solve_radial_profile: |nu| > 1 sampled at r=" + std::to_string(r));
        return y * (1.0 + v) / (r * (1.0 - v));
    };
    auto nu_degenerate = [&](double r) { return std::abs(nu(r)) >= 1.0 - opt.degeneracy_tol; };

    const double h = opt.step;
    const auto steps = static_cast<long>(std::floor((1.0 - opt.r_min) / h));
    std::vector<double> rs, ys;
    rs.reserve(steps + 1);
    ys.reserve(steps + 1);
    double y = 1.0;
    rs.push_back(1.0);
    ys.push_back(y);
    for (long j = 0; j < steps; ++j) {
        const double r = 1.0 - j * h;
        const double r_half = r - 0.5 * h;
        const double r_next = 1.0 - (j + 1) * h;
        if (nu_degenerate(r) || nu_degenerate(r_half) || nu_degenerate(r_next)) {
            degenerate = true;
            degeneracy_radius = r;
            break;
        }
        const double k1 = slope(r, y);
        const double k2 = slope(r_half, y - 0.5 * h * k1);
        const double k3 = slope(r_half, y - 0.5 * h * k2);
        const double k4 = slope(r_next, y - h * k3);
        y -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (y < 0.0) y = 0.0;
        rs.push_back(r_next);
        ys.push_back(y);
    }

    RadialProfile out;
    out.degenerate = degenerate;
    out.degeneracy_radius = degeneracy_radius;
    out.r.assign(rs.rbegin(), rs.rend());
    out.rho.assign(ys.rbegin(), ys.rend());
    return out;
}

} // namespace bdeg
