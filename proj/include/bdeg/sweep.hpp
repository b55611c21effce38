#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bdeg/beltrami.hpp"
#include "bdeg/conditions.hpp"
#include "bdeg/solver.hpp"

namespace bdeg {

/// Dilatation of the inverse map sampled on image-disk nodes: the truncated
/// coefficient is evaluated at the inverse sample, so
/// K(w) = (1 + |mu_k(g(w))|) / (1 - |mu_k(g(w))|). Nodes outside the image
/// disk hold the neutral value 1.
inline RealField inverse_dilatation_field(const QCMap& map, const BeltramiCoefficient& mu_k) {
    if (!map.inverse)
        throw std::invalid_argument("inverse_dilatation_field: map has no inverse samples");
    const GridSpec& s = map.forward.spec;
    RealField out(s, 1.0);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
            const cplx w = s.node(i, j);
            if (std::abs(w) > 1.0) continue;
            const cplx z = map.inverse->at(i, j);
            out.at(i, j) = dilatation_of(mu_k(z));
        }
    return out;
}

struct MajorantReport {
    double fraction_ok = 0.0;    // unit-disk nodes with K <= Q + slack
    double worst_violation = 0.0;  // max(K - Q, 0) over unit-disk nodes
    bool pass = false;           // fraction_ok == 1
};

inline MajorantReport check_majorant(const RealField& K_inv, const MajorantQ& q, double slack) {
    const GridSpec& s = K_inv.spec;
    long total = 0, ok = 0;
    double worst = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
            const cplx w = s.node(i, j);
            if (std::abs(w) > 1.0) continue;
            ++total;
            const double K = K_inv.at(i, j);
            const double Q = q(w);
            if (K <= Q + slack)
                ++ok;
            const double viol = K - Q;
            if (std::isfinite(viol)) worst = std::max(worst, viol);
        }
    MajorantReport rep;
    rep.fraction_ok = total ? static_cast<double>(ok) / total : 1.0;
    rep.worst_violation = std::max(worst, 0.0);
    rep.pass = ok == total;
    return rep;
}

namespace detail {

/// Wirtinger derivative pair of a map: the solver's spectral caches when
/// present (exact for the discrete solution), finite differences otherwise.
inline std::pair<const ComplexField*, const ComplexField*> map_derivatives(
    const QCMap& map, std::optional<WirtingerPair>& storage) {
    if (map.fz && map.fzbar) return {&*map.fz, &*map.fzbar};
    storage = wirtinger_derivatives(map.forward, DerivMethod::centered_fd);
    return {&storage->dz, &storage->dzbar};
}

} // namespace detail

struct EnergyReport {
    double lhs = 0.0;  // \int_C |dz f|^2
    double rhs = 0.0;  // \int_D Q
    bool pass = false; // lhs <= rhs * 1.02
};

inline EnergyReport energy_bound(const QCMap& map, const MajorantQ& q, const Region& C) {
    const GridSpec& s = map.forward.spec;
    std::optional<WirtingerPair> storage;
    auto [fz, fzbar] = detail::map_derivatives(map, storage);
    RealField density(s);
    for (std::size_t m = 0; m < s.size(); ++m) density.values[m] = std::norm(fz->values[m]);
    EnergyReport rep;
    rep.lhs = integrate(density, C);
    rep.rhs = l1_norm(q, s).value;
    rep.pass = rep.lhs <= rep.rhs * 1.02;
    return rep;
}

struct ResidualReport {
    double abs_mean = 0.0;  // |\int_B zeta|, the quantity the convergence bound controls
    double l1 = 0.0;        // \int_B |zeta|
};

/// zeta = dzbar f - mu dz f over a disk B compactly inside the unit disk.
inline ResidualReport beltrami_residual(const QCMap& map, const BeltramiCoefficient& mu,
                                        const Region& B) {
    const GridSpec& s = map.forward.spec;
    std::optional<WirtingerPair> storage;
    auto [fz, fzbar] = detail::map_derivatives(map, storage);
    const double w = s.spacing * s.spacing;
    cplx acc{};
    double l1 = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
            const cplx z = s.node(i, j);
            if (!B.contains(z)) continue;
            const cplx zeta =
                fzbar->at(i, j) - mu(z) * fz->at(i, j);
            acc += zeta;
            l1 += std::abs(zeta);
        }
    return {std::abs(acc) * w, l1 * w};
}

struct ConvergenceDiagnostics {
    std::vector<double> ks;
    std::vector<double> cauchy_sup;  // sup|f_{k_{j+1}} - f_{k_j}| on 0.05 <= |z| <= 0.95
    std::vector<double> I1;          // |\int_B (dzbar f_ref - dzbar f_k)|
    std::vector<double> I2;          // |\int_B (mu dz f_ref - mu_k dz f_k)|
    std::vector<double> zeta_mean;   // |\int_B (dzbar f_k - mu dz f_k)| per k
    double slope_I1 = 0.0;           // least-squares slope of log I vs log k
    double slope_I2 = 0.0;
};

namespace detail {

inline double loglog_slope(const std::vector<double>& ks, const std::vector<double>& vals) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] > 0.0)) continue;
        const double x = std::log(ks[i]), y = std::log(vals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace detail

struct PerTruncation {
    double k = 1.0;
    QCMap map;
    RealField K_inv;
    double residual = 0.0;
    double energy_lhs = 0.0;
    double energy_rhs = 0.0;
    MajorantReport majorant;
    double inner_sup = 0.0;  // max |f_k| over nodes |z| <= 1/2, collapse witness
};

struct SweepConfig {
    BeltramiCoefficient mu;
    std::vector<double> k_list;
    GridSpec spec = make_grid(2.0, 256);
    SolveOptions solve;
    std::optional<MajorantQ> majorant;  // user-supplied; otherwise built empirically
    double majorant_slack = 1e-2;
    Region energy_region = Region::disk(cplx{}, 0.9);
    Region test_disk = Region::disk(cplx{0.3, 0.0}, 0.25);

    void validate() const {
        if (k_list.empty()) throw std::invalid_argument("SweepConfig: k_list must be nonempty");
        for (std::size_t i = 0; i < k_list.size(); ++i) {
            if (k_list[i] < 1.0)
                throw std::invalid_argument("SweepConfig: k values must be >= 1");
            if (i > 0 && !(k_list[i] > k_list[i - 1]))
                throw std::invalid_argument("SweepConfig: k_list must be strictly increasing");
        }
    }
};

struct SweepResult {
    std::vector<PerTruncation> per_k;
    ComplexField limit_estimate;  // finest-k forward samples, never extrapolated
    ConvergenceDiagnostics diagnostics;
    std::string q_source;  // "user" or "empirical"
    bool all_converged = true;
};

/// Grid-map diagnostics against a reference field (the finest map by
/// default, or sampled closed forms). Cauchy increments are node sups over
/// the compact annulus; the disk integrals use the maps' derivative fields.
inline ConvergenceDiagnostics convergence_diagnostics(
    const std::vector<PerTruncation>& per_k, const ComplexField& reference,
    const BeltramiCoefficient& mu, const Region& B) {
    if (per_k.size() < 2)
        throw std::invalid_argument("convergence_diagnostics: need at least 2 sweep entries");
    const GridSpec& s = reference.spec;
    WirtingerPair ref_d = wirtinger_derivatives(reference, DerivMethod::centered_fd);
    ComplexField mu_field = ComplexField::sample(s, mu.eval);

    ConvergenceDiagnostics diag;
    const double w = s.spacing * s.spacing;
    for (const PerTruncation& entry : per_k) {
        diag.ks.push_back(entry.k);
        std::optional<WirtingerPair> storage;
        auto [fz, fzbar] = detail::map_derivatives(entry.map, storage);
        BeltramiCoefficient mu_k = truncate(mu, entry.k);
        cplx a1{}, a2{}, az{};
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j) {
                const cplx z = s.node(i, j);
                if (!B.contains(z)) continue;
                const cplx m = mu_field.at(i, j);
                a1 += ref_d.dzbar.at(i, j) - fzbar->at(i, j);
                a2 += m * ref_d.dz.at(i, j) - mu_k(z) * fz->at(i, j);
                az += fzbar->at(i, j) - m * fz->at(i, j);
            }
        diag.I1.push_back(std::abs(a1) * w);
        diag.I2.push_back(std::abs(a2) * w);
        diag.zeta_mean.push_back(std::abs(az) * w);
    }
    for (std::size_t j = 0; j + 1 < per_k.size(); ++j) {
        double sup = 0.0;
        for (int i = 0; i < s.n; ++i)
            for (int jj = 0; jj < s.n; ++jj) {
                const double az = std::abs(s.node(i, jj));
                if (az < 0.05 || az > 0.95) continue;
                sup = std::max(sup, std::abs(per_k[j + 1].map.forward.at(i, jj) -
                                             per_k[j].map.forward.at(i, jj)));
            }
        diag.cauchy_sup.push_back(sup);
    }
    diag.slope_I1 = detail::loglog_slope(diag.ks, diag.I1);
    diag.slope_I2 = detail::loglog_slope(diag.ks, diag.I2);
    return diag;
}

/// Closed-form sequence diagnostics: everything is evaluated pointwise, so
/// the test disk is integrated on its own fine midpoint mesh and the Cauchy
/// sups use a dense polar sweep. Used when the truncated maps are known
/// analytically.
struct AnalyticSequence {
    std::vector<double> ks;
    std::function<cplx(double, cplx)> f;        // f_k(z)
    std::function<cplx(double, cplx)> dz;       // dz f_k
    std::function<cplx(double, cplx)> dzbar;    // dzbar f_k
    std::function<cplx(double, cplx)> mu_k;     // truncated coefficient
    std::function<cplx(cplx)> mu;               // full coefficient
    std::function<cplx(cplx)> ref_dz;           // reference derivatives
    std::function<cplx(cplx)> ref_dzbar;
};

inline ConvergenceDiagnostics convergence_diagnostics(const AnalyticSequence& seq,
                                                      const Region& B, int quad_n = 2048,
                                                      int sup_r = 2000, int sup_theta = 64) {
    if (seq.ks.size() < 2)
        throw std::invalid_argument("convergence_diagnostics: need at least 2 entries");
    ConvergenceDiagnostics diag;
    diag.ks = seq.ks;

    const double lo_x = B.center.real() - B.r1, hi_x = B.center.real() + B.r1;
    const double lo_y = B.center.imag() - B.r1, hi_y = B.center.imag() + B.r1;
    const double hx = (hi_x - lo_x) / quad_n, hy = (hi_y - lo_y) / quad_n;
    const double w = hx * hy;
    for (const double k : seq.ks) {
        cplx a1{}, a2{}, az{};
        for (int i = 0; i < quad_n; ++i) {
            const double y = lo_y + (i + 0.5) * hy;
            for (int j = 0; j < quad_n; ++j) {
                const cplx z(lo_x + (j + 0.5) * hx, y);
                if (!B.contains(z)) continue;
                const cplx m = seq.mu(z);
                a1 += seq.ref_dzbar(z) - seq.dzbar(k, z);
                a2 += m * seq.ref_dz(z) - seq.mu_k(k, z) * seq.dz(k, z);
                az += seq.dzbar(k, z) - m * seq.dz(k, z);
            }
        }
        diag.I1.push_back(std::abs(a1) * w);
        diag.I2.push_back(std::abs(a2) * w);
        diag.zeta_mean.push_back(std::abs(az) * w);
    }
    for (std::size_t j = 0; j + 1 < seq.ks.size(); ++j) {
        double sup = 0.0;
        for (int ir = 0; ir <= sup_r; ++ir) {
            const double r = 0.05 + (0.95 - 0.05) * ir / sup_r;
            for (int it = 0; it < sup_theta; ++it) {
                const cplx z = std::polar(r, 2.0 * std::numbers::pi * it / sup_theta);
                sup = std::max(sup, std::abs(seq.f(seq.ks[j + 1], z) - seq.f(seq.ks[j], z)));
            }
        }
        diag.cauchy_sup.push_back(sup);
    }
    diag.slope_I1 = detail::loglog_slope(diag.ks, diag.I1);
    diag.slope_I2 = detail::loglog_slope(diag.ks, diag.I2);
    return diag;
}

/// The construction behind the existence scheme: truncate, solve with the
/// two-point normalization, invert, and diagnose every level. Consecutive
/// solves warm-start from the previous level's iteration state. A level
/// that fails to converge is kept and flagged; the sweep only aborts when
/// every level fails.
inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult result;
    const ComplexField* warm = nullptr;
    int solved = 0;
    for (const double k : cfg.k_list) {
        BeltramiCoefficient mu_k = truncate(cfg.mu, k);
        PerTruncation entry;
        entry.k = k;
        entry.map = disk_normalized_solution(mu_k, cfg.spec, cfg.solve, warm);
        entry.residual = entry.map.provenance.residual_l2;
        result.all_converged =
            result.all_converged && entry.map.provenance.converged && entry.map.normalization_ok;
        if (entry.map.provenance.converged) ++solved;
        invert_map(entry.map);
        entry.K_inv = inverse_dilatation_field(entry.map, mu_k);
        entry.inner_sup = 0.0;
        for (int i = 0; i < cfg.spec.n; ++i)
            for (int j = 0; j < cfg.spec.n; ++j)
                if (std::abs(cfg.spec.node(i, j)) <= 0.5)
                    entry.inner_sup =
                        std::max(entry.inner_sup, std::abs(entry.map.forward.at(i, j)));
        result.per_k.push_back(std::move(entry));
        warm = result.per_k.back().map.torus_h ? &*result.per_k.back().map.torus_h : nullptr;
    }
    if (solved == 0) throw std::runtime_error("run_sweep: every truncation level failed to solve");

    // Majorant: user-supplied when given, otherwise the pointwise max of the
    // measured inverse dilatations (the a-posteriori reading of the
    // hypothesis).
    MajorantQ q;
    if (cfg.majorant) {
        q = *cfg.majorant;
        result.q_source = "user";
    } else {
        auto fields = std::make_shared<std::vector<RealField>>();
        for (const PerTruncation& e : result.per_k) fields->push_back(e.K_inv);
        const GridSpec spec = cfg.spec;
        q.eval = [fields, spec](cplx w) {
            double best = 1.0;
            for (const RealField& f : *fields) {
                if (!interpolable(spec, w)) continue;
                best = std::max(best, interpolate(f, w));
            }
            return best;
        };
        q.description = "empirical pointwise max over sweep";
        result.q_source = "empirical";
    }
    for (PerTruncation& entry : result.per_k) {
        entry.majorant = check_majorant(entry.K_inv, q, cfg.majorant_slack);
        EnergyReport er = energy_bound(entry.map, q, cfg.energy_region);
        entry.energy_lhs = er.lhs;
        entry.energy_rhs = er.rhs;
    }

    result.limit_estimate = result.per_k.back().map.forward;
    if (result.per_k.size() >= 2)
        result.diagnostics =
            convergence_diagnostics(result.per_k, result.limit_estimate, cfg.mu, cfg.test_disk);
    return result;
}

} // namespace bdeg
