#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gplab {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on (n, threads), so per-index work is scheduled identically
// across runs. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_chunks(int64_t n, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (n <= 0) return;
    if (threads == 1 || n < 1024) {
        fn(int64_t{0}, n);
        return;
    }
    int64_t nchunks = std::min<int64_t>(threads, n);
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int64_t k = 0; k < nchunks; ++k) {
        int64_t lo = n * k / nchunks;
        int64_t hi = n * (k + 1) / nchunks;
        pool.emplace_back([&, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace gplab
