#pragma once

#include <numbers>

#include "bdeg/fft.hpp"
#include "bdeg/grid.hpp"

namespace bdeg {

enum class DerivMethod { spectral, centered_fd };

struct WirtingerPair {
    ComplexField dz;     // (F_x - i F_y) / 2
    ComplexField dzbar;  // (F_x + i F_y) / 2
};

namespace detail {

inline void require_finite(const ComplexField& f, const char* who) {
    for (const cplx& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument(std::string(who) + ": non-finite input sample");
}

/// Second-order axis derivative, one-sided on the outermost ring.
/// axis 0 = real (column) direction, 1 = imaginary (row) direction.
inline ComplexField fd_axis(const ComplexField& f, int axis) {
    const GridSpec& s = f.spec;
    const int n = s.n;
    const double inv2h = 1.0 / (2.0 * s.spacing);
    ComplexField out(s);
    auto get = [&](int i, int j) { return f.at(i, j); };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int k = axis == 0 ? j : i;
            cplx d;
            auto shifted = [&](int kk) { return axis == 0 ? get(i, kk) : get(kk, j); };
            if (k == 0)
                d = (-3.0 * shifted(0) + 4.0 * shifted(1) - shifted(2)) * inv2h;
            else if (k == n - 1)
                d = (3.0 * shifted(n - 1) - 4.0 * shifted(n - 2) + shifted(n - 3)) * inv2h;
            else
                d = (shifted(k + 1) - shifted(k - 1)) * inv2h;
            out.at(i, j) = d;
        }
    }
    return out;
}

} // namespace detail

/// Wirtinger derivatives of a grid field. The spectral method treats F as
/// periodic on the square; centered_fd uses 2nd-order stencils with one-sided
/// closures on the boundary ring.
inline WirtingerPair wirtinger_derivatives(const ComplexField& f, DerivMethod method) {
    detail::require_finite(f, "wirtinger_derivatives");
    const GridSpec& s = f.spec;
    if (method == DerivMethod::centered_fd) {
        ComplexField fx = detail::fd_axis(f, 0);
        ComplexField fy = detail::fd_axis(f, 1);
        WirtingerPair out{ComplexField(s), ComplexField(s)};
        for (std::size_t m = 0; m < s.size(); ++m) {
            const cplx gx = fx.values[m], gy = fy.values[m];
            out.dz.values[m] = 0.5 * (gx - cplx(0, 1) * gy);
            out.dzbar.values[m] = 0.5 * (gx + cplx(0, 1) * gy);
        }
        return out;
    }

    const int n = s.n;
    std::vector<cplx> hat = f.values;
    fft::transform_2d(hat, n, false);
    std::vector<cplx> hz(hat.size()), hzb(hat.size());
    const double base = std::numbers::pi / s.half_width;
    for (int i = 0; i < n; ++i) {
        const double ky = base * fft::signed_mode(i, n);
        for (int j = 0; j < n; ++j) {
            const double kx = base * fft::signed_mode(j, n);
            const cplx kappa(kx, ky);
            const cplx v = hat[s.index(i, j)];
            hz[s.index(i, j)] = cplx(0, 0.5) * std::conj(kappa) * v;
            hzb[s.index(i, j)] = cplx(0, 0.5) * kappa * v;
        }
    }
    fft::transform_2d(hz, n, true);
    fft::transform_2d(hzb, n, true);
    WirtingerPair out{ComplexField(s), ComplexField(s)};
    out.dz.values = std::move(hz);
    out.dzbar.values = std::move(hzb);
    return out;
}

/// Midpoint-rule integral: nodes are cell centers, each contributing
/// value * spacing^2. Extended-real inputs propagate infinity.
template <class T>
T integrate(const Field<T>& f, const Region& region) {
    region.require_inside(f.spec);
    const GridSpec& s = f.spec;
    const double w = s.spacing * s.spacing;
    T acc{};
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            if (region.contains(s.node(i, j))) acc += f.at(i, j);
    return acc * w;
}

struct FiniteIntegral {
    double value = 0.0;       // contribution of finite samples
    long infinite_nodes = 0;  // skipped +inf samples
    long total_nodes = 0;
    bool finite() const { return infinite_nodes == 0; }
};

/// Midpoint rule that skips isolated +inf samples instead of propagating
/// them, reporting how many were skipped. Used where an integrable point
/// singularity lands exactly on a node.
inline FiniteIntegral integrate_finite(const RealField& f, const Region& region) {
    region.require_inside(f.spec);
    const GridSpec& s = f.spec;
    const double w = s.spacing * s.spacing;
    FiniteIntegral out;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
            if (!region.contains(s.node(i, j))) continue;
            ++out.total_nodes;
            double v = f.at(i, j);
            if (std::isinf(v))
                ++out.infinite_nodes;
            else
                out.value += v * w;
        }
    return out;
}

struct FieldNorms {
    double sup = 0.0;
    double l2 = 0.0;
    double l1 = 0.0;
};

template <class T>
FieldNorms field_norms(const Field<T>& f, const Region& region) {
    region.require_inside(f.spec);
    const GridSpec& s = f.spec;
    const double w = s.spacing * s.spacing;
    FieldNorms out;
    long count = 0;
    double sum1 = 0.0, sum2 = 0.0;
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
            if (!region.contains(s.node(i, j))) continue;
            ++count;
            const double a = std::abs(f.at(i, j));
            out.sup = std::max(out.sup, a);
            sum1 += a;
            sum2 += a * a;
        }
    if (count == 0) throw std::invalid_argument("field_norms: empty region");
    out.l1 = sum1 * w;
    out.l2 = std::sqrt(sum2 * w);
    return out;
}

/// Bilinear interpolation from the four surrounding nodes. z must stay one
/// cell inside the sampled square.
template <class T>
T interpolate(const Field<T>& f, cplx z) {
    const GridSpec& s = f.spec;
    const double x = (z.real() + s.half_width) / s.spacing;
    const double y = (z.imag() + s.half_width) / s.spacing;
    const int j = static_cast<int>(std::floor(x));
    const int i = static_cast<int>(std::floor(y));
    if (i < 0 || j < 0 || i > s.n - 2 || j > s.n - 2)
        throw std::domain_error("interpolate: point outside the one-cell margin");
    const double tx = x - j, ty = y - i;
    const T f00 = f.at(i, j), f01 = f.at(i, j + 1);
    const T f10 = f.at(i + 1, j), f11 = f.at(i + 1, j + 1);
    return f00 * ((1 - tx) * (1 - ty)) + f01 * (tx * (1 - ty)) +
           f10 * ((1 - tx) * ty) + f11 * (tx * ty);
}

inline bool interpolable(const GridSpec& s, cplx z) {
    const double x = (z.real() + s.half_width) / s.spacing;
    const double y = (z.imag() + s.half_width) / s.spacing;
    const int j = static_cast<int>(std::floor(x));
    const int i = static_cast<int>(std::floor(y));
    return !(i < 0 || j < 0 || i > s.n - 2 || j > s.n - 2);
}

} // namespace bdeg
