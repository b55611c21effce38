#pragma once

#include <cmath>
#include <stdexcept>

#include "bdeg/beltrami.hpp"
#include "bdeg/grid.hpp"

namespace bdeg::example {

/// The closed-form degenerate coefficient family on the unit disk:
///
///   mu(z) = e^{2 i theta} (2r - alpha(2r-1)) / (2r + alpha(2r-1)),  1/2 < r < 1
///   mu(z) = 0 otherwise,
///
/// whose dilatation blows up at r = 1/2 while the majorant built from the
/// truncated inverses stays integrable. Everything here is exact closed
/// form, usable as an oracle at arbitrary points; grids only appear at call
/// sites.
struct Params {
    double alpha = 1.0;
    double p = 1.0;
    double k = 4.0;

    void validate() const {
        if (p < 1.0) throw std::invalid_argument("example::Params: p must be >= 1");
        if (!(alpha > 0.0) || !(alpha < 2.0 / p))
            throw std::invalid_argument("example::Params: need 0 < alpha < 2/p");
    }
    void validate_truncated() const {
        validate();
        if (k < 1.0) throw std::invalid_argument("example::Params: k must be >= 1");
        if (k * alpha <= 1.0)
            throw std::invalid_argument("example::Params: k*alpha <= 1 puts the cutoff outside the disk");
    }

    /// Radius where the dilatation crosses k: K(r) <= k iff r >= outer_threshold.
    double outer_threshold() const { return 0.5 * k * alpha / (k * alpha - 1.0); }
    /// Image radius of the collapsing disk, (k alpha - 1)^{-1/alpha}.
    double collapse_radius() const { return std::pow(k * alpha - 1.0, -1.0 / alpha); }
};

inline double nu(const Params& pr, double r) {
    if (r <= 0.5 || r >= 1.0) return 0.0;
    const double t = pr.alpha * (2.0 * r - 1.0);
    return (2.0 * r - t) / (2.0 * r + t);
}

inline cplx mu(const Params& pr, cplx z) {
    const double r = std::abs(z);
    const double v = nu(pr, r);
    if (v == 0.0) return {};
    const cplx dir = z / r;
    return dir * dir * v;
}

inline double radial_profile(const Params& pr, double r) {
    if (r <= 0.5) return 0.0;
    return std::pow(2.0 * r - 1.0, 1.0 / pr.alpha);
}

/// The continuous (non-homeomorphic) solution: collapses |z| <= 1/2 to 0.
inline cplx solution_f(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r <= 0.5) return {};
    return z / r * radial_profile(pr, r);
}

inline double dilatation_K(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r <= 0.5 || r >= 1.0) return 1.0;
    const double d = 2.0 * pr.alpha * (2.0 * r - 1.0);
    return 4.0 * r / d;
}

inline cplx truncated_mu(const Params& pr, cplx z) {
    pr.validate_truncated();
    const double r = std::abs(z);
    if (r < pr.outer_threshold()) return {};
    return mu(pr, z);
}

inline double truncated_K(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r < pr.outer_threshold()) return 1.0;
    return dilatation_K(pr, z);
}

/// Truncated solution: the closed-form branch outside the cutoff circle and
/// the conformal linear scaling inside, continuous across it; the inverse of
/// inverse_g by construction.
inline cplx truncated_f(const Params& pr, cplx z) {
    const double R = pr.outer_threshold();
    const double rho = pr.collapse_radius();
    const double r = std::abs(z);
    if (r <= R) return z * (rho / R);
    return z / r * radial_profile(pr, r);
}

/// Radius profile of truncated_f, handy for the radial checks.
inline double truncated_profile(const Params& pr, double r) {
    const double R = pr.outer_threshold();
    if (r <= R) return r * pr.collapse_radius() / R;
    return radial_profile(pr, r);
}

inline cplx inverse_g(const Params& pr, cplx y) {
    pr.validate_truncated();
    const double rho = pr.collapse_radius();
    const double ay = std::abs(y);
    if (ay <= rho) {
        if (ay == 0.0) return {};
        return y * (pr.outer_threshold() / rho);
    }
    return y * (std::pow(ay, pr.alpha) + 1.0) / (2.0 * ay);
}

/// Dilatation of the inverse map: equals the majorant outside the collapse
/// radius and 1 inside it.
inline double inverse_dilatation(const Params& pr, cplx y) {
    const double ay = std::abs(y);
    if (ay <= pr.collapse_radius()) return 1.0;
    const double t = std::pow(ay, pr.alpha);
    return (t + 1.0) / (pr.alpha * t);
}

/// Q(y) = (|y|^alpha + 1) / (alpha |y|^alpha); +inf at the origin, integrable.
inline double majorant(const Params& pr, cplx y) {
    const double ay = std::abs(y);
    if (ay == 0.0) return inf;
    const double t = std::pow(ay, pr.alpha);
    return (t + 1.0) / (pr.alpha * t);
}

struct MajorantNorm {
    double l1 = 0.0;
    bool p_integrable = false;  // integral of Q^p converges iff alpha * p < 2
};

inline MajorantNorm majorant_l1(const Params& pr) {
    pr.validate();
    MajorantNorm out;
    out.l1 = 2.0 * std::numbers::pi / pr.alpha * (0.5 + 1.0 / (2.0 - pr.alpha));
    out.p_integrable = pr.alpha * pr.p < 2.0;
    return out;
}

// Closed-form Wirtinger derivatives of the solution and its truncations,
// used by the convergence diagnostics where finite differences would smear
// the cutoff circles. For f = (z/|z|) rho(r):
//   dz f = (rho' + rho/r)/2,   dzbar f = e^{2 i theta} (rho' - rho/r)/2.

inline double profile_slope(const Params& pr, double r) {
    return 2.0 / pr.alpha * std::pow(2.0 * r - 1.0, 1.0 / pr.alpha - 1.0);
}

inline cplx dz_f(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r <= 0.5) return {};
    return 0.5 * (profile_slope(pr, r) + radial_profile(pr, r) / r);
}

inline cplx dzbar_f(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r <= 0.5) return {};
    const cplx dir = z / r;
    return dir * dir * 0.5 * (profile_slope(pr, r) - radial_profile(pr, r) / r);
}

inline cplx dz_truncated_f(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r <= pr.outer_threshold()) return pr.collapse_radius() / pr.outer_threshold();
    return dz_f(pr, z);
}

inline cplx dzbar_truncated_f(const Params& pr, cplx z) {
    const double r = std::abs(z);
    if (r <= pr.outer_threshold()) return {};
    return dzbar_f(pr, z);
}

/// Library coefficient wrapping mu; degenerate on purpose (|mu| -> 1 at the
/// inner circle), so it must be truncated before any spectral solve.
inline BeltramiCoefficient coefficient(const Params& pr) {
    pr.validate();
    BeltramiCoefficient out;
    out.eval = [pr](cplx z) { return mu(pr, z); };
    out.ess_sup_hint = 1.0;
    out.description = "example(alpha=" + std::to_string(pr.alpha) + ")";
    return out;
}

} // namespace bdeg::example
