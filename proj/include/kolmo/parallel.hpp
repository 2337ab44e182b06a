#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace kolmo {

/// Parallel map over [0, n). Each index must touch only its own output slot;
/// results are then deterministic for any worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         std::size_t min_grain = 16) {
    std::size_t workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (n < min_grain * 2 || workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (workers > n / min_grain) workers = n / min_grain;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& th : threads) th.join();
}

} // namespace kolmo
