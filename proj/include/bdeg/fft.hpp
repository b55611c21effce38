#pragma once

#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "bdeg/grid.hpp"
#include "bdeg/parallel.hpp"

namespace bdeg::fft {

namespace detail {

struct Tables {
    std::vector<int> rev;    // bit-reversal permutation
    std::vector<cplx> root;  // root[half + j] = exp(-i pi j / half)
};

inline const Tables& tables_for(int n) {
    static std::mutex mtx;
    static std::map<int, Tables> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Tables t;
    t.rev.resize(n);
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < log2n; ++b)
            if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
        t.rev[i] = r;
    }
    t.root.assign(2 * n, cplx{});
    for (int half = 1; half < n; half *= 2) {
        const double step = -std::numbers::pi / half;
        for (int j = 0; j < half; ++j)
            t.root[half + j] = std::polar(1.0, step * j);
    }
    return cache.emplace(n, std::move(t)).first->second;
}

} // namespace detail

/// In-place radix-2 transform; length must be a power of two. The forward
/// transform is unnormalized, the inverse divides by the length.
inline void transform(cplx* a, int n, bool inverse) {
    const auto& t = detail::tables_for(n);
    for (int i = 0; i < n; ++i) {
        int r = t.rev[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (int half = 1; half < n; half *= 2) {
        for (int start = 0; start < n; start += 2 * half) {
            for (int j = 0; j < half; ++j) {
                cplx w = t.root[half + j];
                if (inverse) w = std::conj(w);
                cplx u = a[start + j];
                cplx v = a[start + half + j] * w;
                a[start + j] = u + v;
                a[start + half + j] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / n;
        for (int i = 0; i < n; ++i) a[i] *= scale;
    }
}

/// 2D transform of row-major n x n data: rows first, then columns.
inline void transform_2d(std::vector<cplx>& data, int n, bool inverse) {
    par::parallel_for(0, n, [&](int i) { transform(data.data() + static_cast<std::size_t>(i) * n, n, inverse); });
    par::parallel_for(0, n, [&](int j) {
        std::vector<cplx> col(n);
        for (int i = 0; i < n; ++i) col[i] = data[static_cast<std::size_t>(i) * n + j];
        transform(col.data(), n, inverse);
        for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(i) * n + j] = col[i];
    });
}

/// FFT bin -> signed integer mode in [-n/2, n/2).
inline int signed_mode(int bin, int n) { return bin < n / 2 ? bin : bin - n; }

} // namespace bdeg::fft
