#pragma once

#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace frap {

namespace detail {

inline long double pairwise_sum_ld(const double* x, std::size_t n) {
    if (n <= 32) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < n; ++i) acc += x[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_ld(x, half) + pairwise_sum_ld(x + half, n - half);
}

} // namespace detail

// Tree reduction over a fixed split pattern, accumulated in long double.
// The tree depends only on the element count, so the result is identical
// no matter how callers chunk the work across threads.
inline double pairwise_sum(std::span<const double> xs) {
    return static_cast<double>(detail::pairwise_sum_ld(xs.data(), xs.size()));
}

// Runs fn(i) for i in [0, count) on up to `workers` threads with a static
// block split. fn must only write to slots owned by index i.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (count + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace frap
