#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace conedelta {

/// Runs fn(i) for i in [0, count) on a bounded worker pool; results land in
/// caller-owned storage indexed by i, so gathering preserves input order.
inline void run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn,
                        unsigned jobs = 0) {
    if (count == 0) return;
    unsigned workers = jobs ? jobs : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace conedelta
