#pragma once

#include <functional>
#include <string>
#include <utility>

#include "bdeg/calculus.hpp"
#include "bdeg/grid.hpp"

namespace bdeg {

/// Maximal dilatation of a coefficient value: (1+|mu|)/(1-|mu|), +inf on
/// |mu| = 1.
inline double dilatation_of(cplx mu) {
    const double a = std::abs(mu);
    if (a >= 1.0) return inf;
    return (1.0 + a) / (1.0 - a);
}

/// Pointwise evaluator of a Beltrami coefficient on the plane (supported in
/// the closed unit disk unless stated otherwise). ess_sup_hint < 1 marks a
/// uniformly elliptic coefficient; 1 flags a degenerate one. Hints for
/// truncations are set analytically, not measured.
struct BeltramiCoefficient {
    std::function<cplx(cplx)> eval;
    double ess_sup_hint = 1.0;
    std::string description;

    bool degenerate() const { return ess_sup_hint >= 1.0; }

    cplx operator()(cplx z) const { return eval(z); }
};

inline BeltramiCoefficient zero_coefficient() {
    return {[](cplx) { return cplx{}; }, 0.0, "zero"};
}

/// Fraction of grid nodes in the closed unit disk where |mu| >= 1 (must be 0
/// for an admissible coefficient) plus the sampled sup.
struct CoefficientValidation {
    double bad_fraction = 0.0;
    double sampled_sup = 0.0;
};

inline CoefficientValidation validate_coefficient(const BeltramiCoefficient& mu,
                                                  const GridSpec& spec) {
    long total = 0, bad = 0;
    double sup = 0.0;
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
            const cplx z = spec.node(i, j);
            if (std::abs(z) > 1.0) continue;
            ++total;
            const double a = std::abs(mu(z));
            if (a > 1.0 + 1e-12)
                throw std::invalid_argument("coefficient leaves the closed unit disk: |mu| > 1");
            sup = std::max(sup, a);
            if (a >= 1.0) ++bad;
        }
    return {total ? static_cast<double>(bad) / total : 0.0, sup};
}

/// Extended-real dilatation samples, K >= 1 with +inf where |mu| = 1.
struct DilatationField {
    RealField K;
};

inline DilatationField max_dilatation(const BeltramiCoefficient& mu, const GridSpec& spec) {
    DilatationField out{RealField(spec)};
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j)
            out.K.at(i, j) = dilatation_of(mu(spec.node(i, j)));
    return out;
}

/// Cutoff coefficient: mu where K_mu <= k, zero elsewhere. The threshold is
/// applied pointwise through |mu| <= (k-1)/(k+1), so analytic cutoff circles
/// stay exact rather than grid-quantized. k may be any real >= 1.
inline BeltramiCoefficient truncate(const BeltramiCoefficient& mu, double k) {
    if (k < 1.0) throw std::invalid_argument("truncate: k must be >= 1");
    const double cap = (k - 1.0) / (k + 1.0);
    auto inner = mu.eval;
    BeltramiCoefficient out;
    out.eval = [inner, cap](cplx z) {
        const cplx v = inner(z);
        return std::abs(v) <= cap ? v : cplx{};
    };
    out.ess_sup_hint = cap;
    out.description = mu.description + " truncated at K<=" + std::to_string(k);
    return out;
}

/// mu = e^{2 i theta} nu(r): the rotationally covariant family the radial
/// solver handles. nu is sampled on demand; |nu| <= 1 is enforced at call
/// time.
inline BeltramiCoefficient radial_coefficient(std::function<double(double)> nu,
                                              double ess_sup_hint,
                                              std::string description = "radial") {
    BeltramiCoefficient out;
    out.eval = [nu = std::move(nu)](cplx z) -> cplx {
        const double r = std::abs(z);
        if (r == 0.0 || r > 1.0) return {};
        const double v = nu(r);
        if (std::abs(v) > 1.0)
            throw std::invalid_argument("radial_coefficient: |nu| > 1 sampled");
        if (v == 0.0) return {};
        const cplx dir = z / r;
        return dir * dir * v;
    };
    out.ess_sup_hint = ess_sup_hint;
    out.description = std::move(description);
    return out;
}

struct MapDilatation {
    ComplexField mu_field;
    DilatationField K;
    RealField jacobian;
    double zero_fz_fraction = 0.0;  // nodes where the f_z = 0 convention fired
};

/// Complex dilatation, maximal dilatation and Jacobian of a grid-sampled
/// map. mu := dzbar/dz where dz != 0 and 0 otherwise; J = |dz|^2 - |dzbar|^2.
inline MapDilatation dilatation_of_map(const ComplexField& f,
                                       DerivMethod method = DerivMethod::centered_fd) {
    WirtingerPair d = wirtinger_derivatives(f, method);
    const GridSpec& s = f.spec;
    MapDilatation out{ComplexField(s), DilatationField{RealField(s)}, RealField(s)};
    long zero = 0;
    for (std::size_t m = 0; m < s.size(); ++m) {
        const cplx fz = d.dz.values[m];
        const cplx fzb = d.dzbar.values[m];
        cplx mu{};
        if (fz != cplx{})
            mu = fzb / fz;
        else
            ++zero;
        out.mu_field.values[m] = mu;
        out.K.K.values[m] = dilatation_of(mu);
        out.jacobian.values[m] = std::norm(fz) - std::norm(fzb);
    }
    out.zero_fz_fraction = static_cast<double>(zero) / static_cast<double>(s.size());
    return out;
}

} // namespace bdeg
