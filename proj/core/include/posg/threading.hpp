#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace posg {

/// Runs fn(i) for i in [begin, end) over at most num_threads workers with a
/// static block partition. Each index is processed exactly once, so results
/// written to per-index slots are identical to a serial run.
inline void parallel_for(int begin, int end, int num_threads, const std::function<void(int)>& fn) {
    const int count = end - begin;
    if (count <= 0) return;
    if (num_threads <= 1 || count == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    int workers = std::min(num_threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = begin + w; i < end; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

inline int default_thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace posg
