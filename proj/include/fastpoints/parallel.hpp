#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fastpoints {

// Worker count used by parallel_for: 0 means hardware concurrency.  The CLI
// sets this from its --workers option.  Results never depend on the value:
// every parallel loop writes to per-index slots and reductions run in index
// order on one thread afterward.
inline std::atomic<int>& worker_count_slot() {
    static std::atomic<int> count{0};
    return count;
}

inline void set_worker_count(int n) { worker_count_slot().store(n < 0 ? 0 : n); }

inline int effective_worker_count() {
    int n = worker_count_slot().load();
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

// Runs fn(i) for every i in [0, n), distributing indices over worker threads
// via an atomic cursor.  fn must confine its writes to index-i state.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = effective_worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    const int spawned = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    pool.reserve(static_cast<std::size_t>(spawned));
    for (int w = 0; w < spawned; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= n || failed.load(std::memory_order_relaxed)) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

}  // namespace fastpoints
