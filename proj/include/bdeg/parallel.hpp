#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bdeg::par {

/// Worker count: BDEG_THREADS caps it, hardware concurrency is the default.
inline int thread_count() {
    static const int cached = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("BDEG_THREADS")) {
            int cap = std::atoi(env);
            if (cap >= 1) hw = std::min(hw, cap);
        }
        return hw;
    }();
    return cached;
}

/// Runs f(i) for i in [begin, end) over a static partition. Results must not
/// depend on the partition: bodies write to disjoint slots only, reductions
/// stay sequential elsewhere so output bytes are reproducible.
template <class F>
void parallel_for(int begin, int end, F&& f) {
    const int count = end - begin;
    const int workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (int i = begin; i < end; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    const int chunk = (count + workers - 1) / workers;
    auto run = [&f](int lo, int hi) {
        for (int i = lo; i < hi; ++i) f(i);
    };
    for (int w = 1; w < workers; ++w) {
        int lo = begin + w * chunk;
        int hi = std::min(end, lo + chunk);
        if (lo < hi) pool.emplace_back(run, lo, hi);
    }
    run(begin, std::min(end, begin + chunk));
    for (auto& t : pool) t.join();
}

} // namespace bdeg::par
