#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace levy3d {

/// Worker count: LEVY3D_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LEVY3D_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            hw = static_cast<unsigned>(v);
        }
    }
    return hw;
}

/// Runs fn(i) for every i in [0, count). Work is strided across threads, so
/// fn must only touch state owned by index i.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&fn, count, workers, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
}

}  // namespace levy3d
