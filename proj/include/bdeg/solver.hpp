#pragma once

#include <optional>
#include <queue>

#include "bdeg/beltrami.hpp"
#include "bdeg/calculus.hpp"
#include "bdeg/operators.hpp"
#include "bdeg/radial.hpp"

namespace bdeg {

struct MapProvenance {
    enum class Method { spectral, radial, analytic };
    Method method = Method::analytic;
    int iterations = 0;
    double residual_l2 = 0.0;
    bool converged = true;
    std::vector<double> residual_history;
};

struct MapNormalization {
    cplx f0;
    cplx f1;
};

struct InverseStats {
    double failure_fraction = 0.0;
    double composition_sup = 0.0;       // sup |g(f(z)) - z| on 0.1 < |z| < 0.95
    double composition_bad_fraction = 0.0;  // nodes beyond 2*spacing there
    double jacobian_positive_fraction = 1.0;
    bool reliable = true;
};

/// A solved map of the unit disk: forward samples on the full grid, optional
/// inverse samples over the image disk, normalization record and solver
/// provenance. Derivative caches hold the exact spectral derivatives of the
/// discrete solution when the map came from the spectral solver.
struct QCMap {
    ComplexField forward;
    std::optional<ComplexField> inverse;
    std::optional<ComplexField> fz;
    std::optional<ComplexField> fzbar;
    MapNormalization normalization;
    MapProvenance provenance;
    std::optional<RadialProfile> profile;
    std::optional<InverseStats> inverse_stats;
    std::optional<ComplexField> torus_h;  // raw solver state, reusable as warm start
    bool normalization_ok = true;
    double boundary_defect = 0.0;  // max over the unit circle of ||f| - 1|
};

struct SolveOptions {
    double tol = 1e-6;
    int max_iter = 200;
    enum class Extension { reflect, zero };
    Extension extension = Extension::reflect;
};

/// Solution of the uniformly elliptic equation dzbar f = mu dz f on the
/// periodic square, normalized like the identity: f = z + C h where h solves
/// h = mu (S h) + mu. Convergence is geometric with ratio ess_sup_hint; the
/// reported residual is ||dzbar f - mu dz f||_2 / ||dz f||_2 with the
/// derivatives evaluated spectrally, which is exact for the discrete
/// solution.
inline QCMap principal_solution(const BeltramiCoefficient& mu, const GridSpec& spec,
                                double tol, int max_iter,
                                const ComplexField* warm_start = nullptr) {
    if (mu.degenerate())
        throw std::invalid_argument(
            "principal_solution: degenerate coefficient (ess_sup_hint >= 1); truncate first");

    ComplexField mu_field = ComplexField::sample(spec, mu.eval);
    const SpectralOperator op = SpectralOperator::make(spec);
    const std::size_t m = spec.size();

    ComplexField h = warm_start && warm_start->spec == spec ? *warm_start : ComplexField(spec);
    ComplexField sh(spec);
    MapProvenance prov;
    prov.method = MapProvenance::Method::spectral;

    double residual = 0.0;
    int iter = 0;
    while (true) {
        sh = beurling_apply(op, h);
        const cplx mean_h = field_mean(h);
        double num = 0.0, den = 0.0;
        for (std::size_t idx = 0; idx < m; ++idx) {
            const cplx df = 1.0 + sh.values[idx];
            const cplx rhs = mu_field.values[idx] * df;
            num += std::norm(h.values[idx] - mean_h - rhs);
            den += std::norm(df);
        }
        residual = std::sqrt(num / den);
        prov.residual_history.push_back(residual);
        if (residual <= tol) {
            prov.converged = true;
            break;
        }
        if (iter >= max_iter) {
            prov.converged = false;  // reported, not silently accepted
            break;
        }
        for (std::size_t idx = 0; idx < m; ++idx)
            h.values[idx] = mu_field.values[idx] * (1.0 + sh.values[idx]);
        ++iter;
    }
    prov.iterations = iter;
    prov.residual_l2 = residual;

    ComplexField correction = cauchy_apply(op, h);
    QCMap out;
    out.forward = ComplexField(spec);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j)
            out.forward.at(i, j) = spec.node(i, j) + correction.at(i, j);

    const cplx mean_h = field_mean(h);
    ComplexField fz(spec), fzbar(spec);
    for (std::size_t idx = 0; idx < m; ++idx) {
        fz.values[idx] = 1.0 + sh.values[idx];
        fzbar.values[idx] = h.values[idx] - mean_h;
    }
    out.fz = std::move(fz);
    out.fzbar = std::move(fzbar);
    out.torus_h = std::move(h);
    out.provenance = std::move(prov);
    out.normalization.f0 = interpolate(out.forward, cplx{});
    out.normalization.f1 = interpolate(out.forward, cplx{1.0, 0.0});
    return out;
}

/// Reflection of a disk-supported coefficient across the unit circle. The
/// extended problem's solutions satisfy f(1/conj(z)) = 1/conj(f(z)), which
/// is what makes the solved map preserve the circle (validated by the
/// boundary test, not assumed).
inline BeltramiCoefficient extend_coefficient(const BeltramiCoefficient& mu,
                                              SolveOptions::Extension ext) {
    BeltramiCoefficient out;
    out.ess_sup_hint = mu.ess_sup_hint;
    out.description = mu.description +
                      (ext == SolveOptions::Extension::reflect ? " (reflected)" : " (zero-extended)");
    auto inner = mu.eval;
    if (ext == SolveOptions::Extension::zero) {
        out.eval = [inner](cplx z) { return std::abs(z) <= 1.0 ? inner(z) : cplx{}; };
    } else {
        out.eval = [inner](cplx z) -> cplx {
            const double r = std::abs(z);
            if (r <= 1.0) return inner(z);
            const cplx w = 1.0 / std::conj(z);
            const cplx zc = std::conj(z);
            return std::conj(inner(w)) * (z * z) / (zc * zc);
        };
    }
    return out;
}

namespace detail {

inline cplx mobius_to_origin(cplx w, cplx a) { return (w - a) / (1.0 - std::conj(a) * w); }

inline cplx mobius_derivative(cplx w, cplx a) {
    const cplx d = 1.0 - std::conj(a) * w;
    return (1.0 - std::norm(a)) / (d * d);
}

} // namespace detail

/// Boundary defect max_theta ||f(e^{i theta})| - 1| by dense interpolation.
inline double circle_defect(const ComplexField& f, int samples = 2048) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
        const double th = 2.0 * std::numbers::pi * t / samples;
        const cplx w = interpolate(f, std::polar(1.0, th));
        worst = std::max(worst, std::abs(std::abs(w) - 1.0));
    }
    return worst;
}

/// Solves on the disk with the two-point normalization f(0) = 0, f(1) = 1.
/// The coefficient is extended outside the disk (reflection by default),
/// solved on the periodic square, then post-composed with the disk
/// automorphism w -> (w - a)/(1 - conj(a) w) scaled so both normalization
/// points are hit exactly; post-composition with a conformal map leaves the
/// Beltrami coefficient untouched.
inline QCMap disk_normalized_solution(const BeltramiCoefficient& mu, const GridSpec& spec,
                                      const SolveOptions& opt = {},
                                      const ComplexField* warm_start = nullptr) {
    if (spec.half_width < 1.0 + 2.0 * spec.spacing)
        throw std::invalid_argument("disk_normalized_solution: need half_width > 1 plus margin");
    BeltramiCoefficient extended = extend_coefficient(mu, opt.extension);
    QCMap map = principal_solution(extended, spec, opt.tol, opt.max_iter, warm_start);

    const cplx a = interpolate(map.forward, cplx{});
    if (std::abs(a) >= 1.0) {
        map.normalization_ok = false;  // normalization impossible, flagged
        return map;
    }
    const cplx lambda = detail::mobius_to_origin(interpolate(map.forward, cplx{1.0, 0.0}), a);
    if (lambda == cplx{})
        throw std::runtime_error("disk_normalized_solution: f(1) = f(0), cannot normalize");

    const GridSpec& s = spec;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        const cplx w = map.forward.values[idx];
        const cplx scale = detail::mobius_derivative(w, a) / lambda;
        map.forward.values[idx] = detail::mobius_to_origin(w, a) / lambda;
        if (map.fz) map.fz->values[idx] *= scale;
        if (map.fzbar) map.fzbar->values[idx] *= scale;
    }
    map.normalization.f0 = interpolate(map.forward, cplx{});
    map.normalization.f1 = interpolate(map.forward, cplx{1.0, 0.0});
    map.boundary_defect = circle_defect(map.forward);
    return map;
}

/// Rotationally covariant solve through the radial profile ODE; the
/// independent oracle for coefficients of the form e^{2 i theta} nu(r).
/// Outside the unit disk the samples continue by the circle reflection,
/// clamped where the reflected profile degenerates.
inline QCMap radial_solve(const std::function<double(double)>& nu, const GridSpec& spec,
                          const RadialSolveOptions& opt = {}) {
    RadialProfile profile = solve_radial_profile(nu, opt);
    const double cap = 8.0 * spec.half_width;
    QCMap out;
    out.forward = ComplexField::sample(spec, [&](cplx z) -> cplx {
        const double r = std::abs(z);
        if (r == 0.0) return {};
        double rho;
        if (r <= 1.0) {
            rho = profile.eval(r);
        } else {
            const double inner = profile.eval(1.0 / r);
            rho = inner > 1.0 / cap ? 1.0 / inner : cap;
        }
        return z / r * rho;
    });
    out.provenance.method = MapProvenance::Method::radial;
    out.provenance.iterations = static_cast<int>(profile.r.size());
    out.provenance.converged = true;
    out.normalization.f0 = cplx{};
    out.normalization.f1 = cplx{1.0, 0.0};
    out.profile = std::move(profile);
    return out;
}

/// Wraps exact samples of a closed-form map as a QCMap.
inline QCMap analytic_map(const GridSpec& spec, const std::function<cplx(cplx)>& f) {
    QCMap out;
    out.forward = ComplexField::sample(spec, f);
    out.provenance.method = MapProvenance::Method::analytic;
    out.normalization.f0 = f(cplx{});
    out.normalization.f1 = f(cplx{1.0, 0.0});
    return out;
}

struct InvertOptions {
    int max_newton = 40;
    double target_tol = 1e-11;
    double margin_cells = 2.0;  // Newton targets: |w| <= 1 + margin_cells * spacing
};

/// Samples the inverse map on the grid over the image disk: Newton iteration
/// on the bilinearly interpolated forward map, seeded by nearest-sample
/// lookup. Nodes outside the image disk are filled through the circle
/// reflection so interpolation near |w| = 1 stays clean.
inline InverseStats invert_map(QCMap& map, const InvertOptions& opt = {}) {
    const GridSpec& s = map.forward.spec;
    const int n = s.n;
    const double h = s.spacing;

    if (!map.fz || !map.fzbar) {
        WirtingerPair d = wirtinger_derivatives(map.forward, DerivMethod::centered_fd);
        map.fz = std::move(d.dz);
        map.fzbar = std::move(d.dzbar);
    }

    InverseStats stats;
    {
        long pos = 0, tot = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (std::abs(s.node(i, j)) > 0.99) continue;
                ++tot;
                const double J = std::norm(map.fz->at(i, j)) - std::norm(map.fzbar->at(i, j));
                if (J > 0.0) ++pos;
            }
        stats.jacobian_positive_fraction = tot ? static_cast<double>(pos) / tot : 1.0;
    }

    // Nearest-sample seeding: bin forward values into target cells.
    std::vector<double> best(s.size(), inf);
    std::vector<cplx> seed(s.size(), cplx{});
    std::vector<char> seeded(s.size(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx w = map.forward.at(i, j);
            const int cj = static_cast<int>(std::lround((w.real() + s.half_width) / h));
            const int ci = static_cast<int>(std::lround((w.imag() + s.half_width) / h));
            if (ci < 0 || cj < 0 || ci >= n || cj >= n) continue;
            const double d2 = std::norm(w - s.node(ci, cj));
            const std::size_t idx = s.index(ci, cj);
            if (d2 < best[idx]) {
                best[idx] = d2;
                seed[idx] = s.node(i, j);
                seeded[idx] = 1;
            }
        }
    // Flood-fill seeds into cells no forward value landed in.
    {
        std::queue<std::pair<int, int>> q;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (seeded[s.index(i, j)]) q.emplace(i, j);
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        while (!q.empty()) {
            auto [i, j] = q.front();
            q.pop();
            for (int d = 0; d < 4; ++d) {
                const int ni = i + di[d], nj = j + dj[d];
                if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
                const std::size_t idx = s.index(ni, nj);
                if (seeded[idx]) continue;
                seeded[idx] = 1;
                seed[idx] = seed[s.index(i, j)];
                q.emplace(ni, nj);
            }
        }
    }

    ComplexField inv(s);
    std::vector<char> newton_done(s.size(), 0);
    const double reach = 1.0 + opt.margin_cells * h;
    const double margin = s.half_width - 2.0 * h;
    long targets = 0, failures = 0;

    std::vector<long> fail_per_row(n, 0);
    par::parallel_for(0, n, [&](int i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = s.index(i, j);
            const cplx w = s.node(i, j);
            if (std::abs(w) > reach) continue;
            cplx z = seed[idx];
            cplx best_z = z;
            double best_err = inf;
            bool ok = false;
            for (int it = 0; it < opt.max_newton; ++it) {
                if (std::abs(z.real()) > margin || std::abs(z.imag()) > margin) {
                    z = cplx(std::clamp(z.real(), -margin, margin),
                             std::clamp(z.imag(), -margin, margin));
                }
                const cplx e = interpolate(map.forward, z) - w;
                const double ae = std::abs(e);
                if (ae < best_err) {
                    best_err = ae;
                    best_z = z;
                }
                if (ae <= opt.target_tol) {
                    ok = true;
                    break;
                }
                const cplx A = interpolate(*map.fz, z);
                const cplx B = interpolate(*map.fzbar, z);
                const double det = std::norm(A) - std::norm(B);
                if (det == 0.0) break;
                const cplx c = -e;
                cplx delta = (std::conj(A) * c - B * std::conj(c)) / det;
                const double cap = 8.0 * h;
                const double ad = std::abs(delta);
                if (ad > cap) delta *= cap / ad;
                z += delta;
            }
            inv.values[idx] = best_z;
            newton_done[idx] = 1;
            if (!ok && best_err > 1e-6) fail_per_row[i] += 1;
        }
    });
    for (int i = 0; i < n; ++i) failures += fail_per_row[i];
    for (const char c : newton_done) targets += c;

    // Reflection fill for nodes beyond the image disk (diagnostic only).
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = s.index(i, j);
            if (newton_done[idx]) continue;
            const cplx w = s.node(i, j);
            const double aw = std::abs(w);
            cplx value{};
            if (aw > 0.0) {
                const cplx win = 1.0 / std::conj(w);
                if (interpolable(s, win)) {
                    const cplx g = interpolate(inv, win);
                    const double ag = std::abs(g);
                    value = ag > 1.0 / (8.0 * s.half_width) ? 1.0 / std::conj(g)
                                                            : w / aw * 8.0 * s.half_width;
                }
            }
            inv.values[idx] = value;
        }

    stats.failure_fraction = targets ? static_cast<double>(failures) / targets : 0.0;
    // Composition check g(f(z)) ~ z on the annulus 0.1 < |z| < 0.95.
    {
        double sup = 0.0;
        long tot = 0, bad = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cplx z = s.node(i, j);
                const double az = std::abs(z);
                if (az <= 0.1 || az >= 0.95) continue;
                const cplx w = map.forward.at(i, j);
                if (!interpolable(s, w)) continue;
                ++tot;
                const double err = std::abs(interpolate(inv, w) - z);
                sup = std::max(sup, err);
                if (err > 2.0 * h) ++bad;
            }
        stats.composition_sup = sup;
        stats.composition_bad_fraction = tot ? static_cast<double>(bad) / tot : 0.0;
    }
    stats.reliable = stats.failure_fraction <= 0.01;
    map.inverse = std::move(inv);
    map.inverse_stats = stats;
    return stats;
}

} // namespace bdeg
