#pragma once

#include <numbers>

#include "bdeg/calculus.hpp"
#include "bdeg/fft.hpp"
#include "bdeg/grid.hpp"

namespace bdeg {

/// Fourier-multiplier operators on the periodic square. The two we need:
///
///   beurling: conj(kappa)/kappa   (unimodular away from 0, S dzbar = dz)
///   cauchy:   2/(i kappa)         (antiderivative, dzbar(C h) = h - mean h)
///
/// Both set the zero mode to 0 by convention.
struct SpectralOperator {
    GridSpec spec;
    std::vector<cplx> beurling_mult;
    std::vector<cplx> cauchy_mult;

    static SpectralOperator make(const GridSpec& spec) {
        SpectralOperator op;
        op.spec = spec;
        const int n = spec.n;
        op.beurling_mult.assign(spec.size(), cplx{});
        op.cauchy_mult.assign(spec.size(), cplx{});
        const double base = std::numbers::pi / spec.half_width;
        for (int i = 0; i < n; ++i) {
            const double ky = base * fft::signed_mode(i, n);
            for (int j = 0; j < n; ++j) {
                const double kx = base * fft::signed_mode(j, n);
                const cplx kappa(kx, ky);
                if (kappa == cplx{}) continue;
                op.beurling_mult[spec.index(i, j)] = std::conj(kappa) / kappa;
                op.cauchy_mult[spec.index(i, j)] = 2.0 / (cplx(0, 1) * kappa);
            }
        }
        return op;
    }
};

namespace detail {

inline ComplexField apply_multiplier(const SpectralOperator& op, const ComplexField& h,
                                     const std::vector<cplx>& mult) {
    if (h.spec != op.spec) throw std::invalid_argument("spectral operator: grid spec mismatch");
    const int n = op.spec.n;
    std::vector<cplx> hat = h.values;
    fft::transform_2d(hat, n, false);
    for (std::size_t m = 0; m < hat.size(); ++m) hat[m] *= mult[m];
    fft::transform_2d(hat, n, true);
    ComplexField out(op.spec);
    out.values = std::move(hat);
    return out;
}

} // namespace detail

/// Singular-integral part of the solver: L2-isometric on mean-zero fields.
inline ComplexField beurling_apply(const SpectralOperator& op, const ComplexField& h) {
    return detail::apply_multiplier(op, h, op.beurling_mult);
}

/// Antiderivative: dzbar(cauchy_apply(h)) = h - mean(h), zero mode dropped.
inline ComplexField cauchy_apply(const SpectralOperator& op, const ComplexField& h) {
    return detail::apply_multiplier(op, h, op.cauchy_mult);
}

inline cplx field_mean(const ComplexField& f) {
    cplx acc{};
    for (const cplx& v : f.values) acc += v;
    return acc / static_cast<double>(f.values.size());
}

} // namespace bdeg
