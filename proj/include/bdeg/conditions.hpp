#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bdeg/calculus.hpp"
#include "bdeg/quadrature.hpp"
#include "bdeg/solver.hpp"

namespace bdeg {

/// Pointwise majorant evaluator, Q >= 1 (infinity allowed at isolated
/// points).
struct MajorantQ {
    std::function<double(cplx)> eval;
    std::string description;

    double operator()(cplx w) const { return eval(w); }
};

inline MajorantQ constant_majorant(double c, std::string description = "") {
    if (c < 1.0) throw std::invalid_argument("constant_majorant: Q must be >= 1");
    return {[c](cplx) { return c; },
            description.empty() ? "Q=" + std::to_string(c) : std::move(description)};
}

struct L1Report {
    double value = 0.0;
    long infinite_nodes = 0;
    long total_nodes = 0;
    bool integrable = true;
};

/// L1 norm of Q over the unit disk by midpoint quadrature. Isolated +inf
/// samples (an integrable point singularity sitting exactly on a node) are
/// skipped and counted; the result is flagged non-integrable only when the
/// infinite samples occupy a positive area fraction.
inline L1Report l1_norm(const MajorantQ& q, const GridSpec& spec) {
    const double w = spec.spacing * spec.spacing;
    L1Report out;
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
            const cplx z = spec.node(i, j);
            if (std::abs(z) > 1.0) continue;
            ++out.total_nodes;
            const double v = q(z);
            if (std::isinf(v)) {
                ++out.infinite_nodes;
                continue;
            }
            if (!(v >= 1.0 - 1e-9))
                throw std::invalid_argument("l1_norm: sampled Q < 1 violates the majorant range");
            out.value += v * w;
        }
    if (out.infinite_nodes > out.total_nodes / 1000) {
        out.integrable = false;
        out.value = inf;
    }
    return out;
}

/// Circular mean (1/2pi) \int Q(w0 + r e^{i theta}) d theta, trapezoid rule
/// (exact for trigonometric polynomials).
inline double circular_mean(const MajorantQ& q, cplx w0, double r, int n_theta = 256) {
    if (!(r > 0.0)) throw std::invalid_argument("circular_mean: r must be positive");
    if (n_theta < 64) throw std::invalid_argument("circular_mean: n_theta must be >= 64");
    double acc = 0.0;
    for (int t = 0; t < n_theta; ++t) {
        const double th = 2.0 * std::numbers::pi * t / n_theta;
        acc += q(w0 + std::polar(r, th));
    }
    return acc / n_theta;
}

struct DivergenceReport {
    cplx point;
    double delta = 0.0;
    std::vector<double> cutoffs;            // delta * 2^{-m}, decreasing
    std::vector<double> partial_integrals;  // int_{cutoff_m}^{delta} dt/(t q(t))
    enum class Verdict { divergent, convergent, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    double limit = 0.0;  // extrapolated value when convergent
};

/// Tests \int_0^delta dt/(t q_{w0}(t)) for divergence by dyadic cutoffs.
/// After u = log t each dyadic slice is a smooth integral of 1/q(e^u);
/// increments that stabilize above a positive floor mean divergence, a
/// geometric decay means convergence with a summable tail.
inline DivergenceReport divergence_integral_check(const MajorantQ& q, cplx w0, double delta,
                                                  int levels = 20, int n_theta = 256) {
    if (!(delta > 0.0)) throw std::invalid_argument("divergence_integral_check: delta must be > 0");
    if (levels < 4) throw std::invalid_argument("divergence_integral_check: need at least 4 levels");
    auto qr = [&](double t) {
        const double v = circular_mean(q, w0, t, n_theta);
        if (!(v > 0.0))
            throw std::invalid_argument("divergence_integral_check: q = 0 violates Q >= 1");
        return v;
    };

    DivergenceReport rep;
    rep.point = w0;
    rep.delta = delta;
    std::vector<double> increments(levels);
    double upper = delta;
    double total = 0.0;
    for (int m = 1; m <= levels; ++m) {
        const double lower = delta * std::pow(2.0, -m);
        const double inc = quad::adaptive_simpson(
            [&](double u) { return 1.0 / qr(std::exp(u)); }, std::log(lower), std::log(upper),
            1e-10, 30);
        increments[m - 1] = inc;
        total += inc;
        rep.cutoffs.push_back(lower);
        rep.partial_integrals.push_back(total);
        upper = lower;
    }

    const double floor = 0.05 * std::numbers::ln2;
    const int tail = std::min(3, levels);
    double tail_min = inf;
    for (int m = levels - tail; m < levels; ++m) tail_min = std::min(tail_min, increments[m]);
    if (tail_min >= floor) {
        rep.verdict = DivergenceReport::Verdict::divergent;
        return rep;
    }
    bool geometric = true;
    double ratio = 0.0;
    for (int m = levels - tail; m < levels; ++m) {
        if (increments[m - 1] <= 0.0) {
            geometric = increments[m] <= 0.0;
            continue;
        }
        const double rr = increments[m] / increments[m - 1];
        ratio = rr;
        if (!(rr < 0.7)) geometric = false;
    }
    if (geometric) {
        rep.verdict = DivergenceReport::Verdict::convergent;
        const double tail_sum =
            ratio > 0.0 && ratio < 1.0 ? increments[levels - 1] * ratio / (1.0 - ratio) : 0.0;
        rep.limit = total + tail_sum;
    }
    return rep;
}

struct FmoReport {
    cplx point;
    std::vector<double> epsilons;   // strictly decreasing
    std::vector<double> mean_osc;   // (1/(pi eps^2)) \int |phi - mean| over B(x0, eps)
    std::vector<double> means;      // phi averaged over the same balls
    enum class Verdict { fmo_consistent, diverging, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    double slope = 0.0;  // least-squares slope of log mean_osc vs log eps
};

struct FmoOptions {
    int n_r = 2048;
    int n_theta = 256;
};

/// Normalized mean oscillation of phi over shrinking balls around x0. A
/// limsup cannot be computed, only sampled: the verdict is trend-based with
/// the thresholds visible here (slope < -0.2 toward small eps means the
/// oscillation grows; a bounded tail means consistency with finite mean
/// oscillation). Samples are shifted by one reference value first, so a
/// constant phi reports exactly zero.
inline FmoReport fmo_estimate(const std::function<double(cplx)>& phi, cplx x0,
                              std::vector<double> epsilons, const FmoOptions& opt = {}) {
    if (epsilons.size() < 2)
        throw std::invalid_argument("fmo_estimate: need at least 2 epsilons");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("fmo_estimate: epsilons must be strictly decreasing");

    FmoReport rep;
    rep.point = x0;
    rep.epsilons = epsilons;
    for (const double eps : epsilons) {
        const double dr = eps / opt.n_r;
        const double dth = 2.0 * std::numbers::pi / opt.n_theta;
        const double shift = phi(x0 + cplx(0.5 * dr, 0.0));
        double wsum = 0.0, vsum = 0.0;
        long bad = 0, total = 0;
        std::vector<double> vals;
        std::vector<double> weights;
        vals.reserve(static_cast<std::size_t>(opt.n_r) * opt.n_theta);
        weights.reserve(vals.capacity());
        for (int ir = 0; ir < opt.n_r; ++ir) {
            const double r = (ir + 0.5) * dr;
            const double w = r * dr * dth;
            for (int it = 0; it < opt.n_theta; ++it) {
                const double th = it * dth;
                const double v = phi(x0 + std::polar(r, th)) - shift;
                ++total;
                if (!std::isfinite(v)) {
                    ++bad;
                    continue;
                }
                vals.push_back(v);
                weights.push_back(w);
                wsum += w;
                vsum += w * v;
            }
        }
        if (bad > total / 1000)
            throw std::invalid_argument("fmo_estimate: phi not integrable on the sampled ball");
        const double mean = vsum / wsum;
        double osc = 0.0;
        for (std::size_t m = 0; m < vals.size(); ++m) osc += weights[m] * std::abs(vals[m] - mean);
        osc /= std::numbers::pi * eps * eps;
        rep.mean_osc.push_back(osc);
        rep.means.push_back(shift + mean);
    }

    // Trend classification.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < epsilons.size(); ++i)
        if (rep.mean_osc[i] > 0.0) pts.emplace_back(std::log(epsilons[i]), std::log(rep.mean_osc[i]));
    if (pts.empty()) {
        rep.verdict = FmoReport::Verdict::fmo_consistent;  // identically zero oscillation
        return rep;
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = pts.size();
        rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    const std::size_t count = rep.mean_osc.size();
    const std::size_t take = std::min<std::size_t>(3, count);
    double lo = inf, hi = 0.0;
    bool tail_zero = false;
    for (std::size_t i = count - take; i < count; ++i) {
        const double v = rep.mean_osc[i];
        if (v == 0.0) {
            tail_zero = true;
            continue;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (rep.slope < -0.2)
        rep.verdict = FmoReport::Verdict::diverging;
    else if (!tail_zero && hi / lo < 10.0)
        rep.verdict = FmoReport::Verdict::fmo_consistent;
    else
        rep.verdict = FmoReport::Verdict::inconclusive;
    return rep;
}

struct ContinuityReport {
    cplx z0;
    double r0 = 0.0;
    double empirical_C = 0.0;
    std::vector<std::pair<double, double>> profile;  // (|z - z0|, weighted increment)
};

/// Empirical constant of the logarithmic modulus-of-continuity bound:
/// max over sampled z of |f(z)-f(z0)| sqrt(log(1 + r0/|z-z0|)) / sqrt(q_l1).
/// Sampling is deterministic (Halton, prefix-stable), so doubling the count
/// only extends the point set.
inline ContinuityReport continuity_estimate(const std::function<cplx(cplx)>& f, cplx z0,
                                            double r0, double q_l1, int samples,
                                            std::uint64_t seed = 0) {
    const double dist = 1.0 - std::abs(z0);
    if (!(r0 > 0.0) || !(2.0 * r0 < dist))
        throw std::invalid_argument("continuity_estimate: need 0 < 2 r0 < dist(z0, unit circle)");
    if (!(q_l1 > 0.0)) throw std::invalid_argument("continuity_estimate: q_l1 must be positive");
    ContinuityReport rep;
    rep.z0 = z0;
    rep.r0 = r0;
    rep.profile.reserve(samples);
    const cplx f0 = f(z0);
    const double scale = 1.0 / std::sqrt(q_l1);
    for (int k = 0; k < samples; ++k) {
        const cplx z = quad::halton_disk_point(static_cast<std::uint64_t>(k), z0, r0, seed);
        const double d = std::abs(z - z0);
        if (d == 0.0) continue;
        const double v = std::abs(f(z) - f0) * std::sqrt(std::log1p(r0 / d)) * scale;
        rep.profile.emplace_back(d, v);
        rep.empirical_C = std::max(rep.empirical_C, v);
    }
    return rep;
}

inline ContinuityReport continuity_estimate(const QCMap& map, cplx z0, double r0, double q_l1,
                                            int samples, std::uint64_t seed = 0) {
    return continuity_estimate(
        [&map](cplx z) { return interpolate(map.forward, z); }, z0, r0, q_l1, samples, seed);
}

struct RingModulusReport {
    double r = 0.0, R = 0.0;
    double lhs = 0.0;  // modulus of the image circle family
    double rhs = 0.0;  // (1/2pi) \int_r^R q_0(t) dt/t
    bool pass = false;
};

/// Modulus inequality for the concentric-circle family in the annulus
/// A(0; r, R): the extremal admissible density 1/(2 pi |w|) turns the
/// majorant side into a 1D integral of the circular mean, and the image side
/// into a log-ratio of the radius profile.
inline RingModulusReport ring_modulus_check(const std::function<double(double)>& sigma,
                                            const MajorantQ& q, double r, double R,
                                            double rel_slack = 1e-6, int n_theta = 256) {
    if (!(0.0 < r && r < R && R <= 1.0))
        throw std::invalid_argument("ring_modulus_check: need 0 < r < R <= 1");
    RingModulusReport rep;
    rep.r = r;
    rep.R = R;
    const double num = sigma(R), den = sigma(r);
    if (!(num > 0.0) || !(den > 0.0))
        throw std::invalid_argument("ring_modulus_check: profile must be positive on [r, R]");
    const double two_pi = 2.0 * std::numbers::pi;
    rep.lhs = std::log(num / den) / two_pi;
    rep.rhs = quad::adaptive_simpson(
                  [&](double t) { return circular_mean(q, cplx{}, t, n_theta) / t; }, r, R, 1e-11, 36) /
              two_pi;
    rep.pass = rep.lhs <= rep.rhs * (1.0 + rel_slack);
    return rep;
}

/// QCMap front end: uses the stored radius profile when present, otherwise
/// extracts it by angular averaging and refuses maps that are measurably
/// non-radial.
inline RingModulusReport ring_modulus_check(const QCMap& map, const MajorantQ& q, double r,
                                            double R, double rel_slack = 1e-2,
                                            int n_theta = 256) {
    std::function<double(double)> sigma;
    if (map.profile) {
        const RadialProfile& prof = *map.profile;
        sigma = [&prof](double t) { return prof.eval(t); };
    } else {
        const ComplexField& fwd = map.forward;
        sigma = [&fwd, n_theta](double t) {
            double mean = 0.0;
            std::vector<double> vals(n_theta);
            for (int k = 0; k < n_theta; ++k) {
                const double th = 2.0 * std::numbers::pi * k / n_theta;
                vals[k] = std::abs(interpolate(fwd, std::polar(t, th)));
                mean += vals[k];
            }
            mean /= n_theta;
            for (const double v : vals)
                if (std::abs(v - mean) > 0.01 * mean)
                    throw std::invalid_argument(
                        "ring_modulus_check: map is not radial (asymmetry over 1%)");
            return mean;
        };
    }
    return ring_modulus_check(sigma, q, r, R, rel_slack, n_theta);
}

} // namespace bdeg
