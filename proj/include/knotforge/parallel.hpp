#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace knotforge {

// Deterministic fork-join map over [0, n): fixed chunking by index, results
// merged in index order regardless of thread scheduling.
//
// fn(i) -> T; the returned vector is [fn(0), ..., fn(n-1)].
template <typename T, typename Fn>
std::vector<T> parallel_map(int64_t n, int threads, Fn&& fn) {
    std::vector<T> out((size_t)n);
    if (n == 0) return out;
    if (threads <= 1 || n == 1) {
        for (int64_t i = 0; i < n; ++i) out[(size_t)i] = fn(i);
        return out;
    }
    int workers = (int)std::min<int64_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int64_t i = w; i < n; i += workers) out[(size_t)i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

} // namespace knotforge
