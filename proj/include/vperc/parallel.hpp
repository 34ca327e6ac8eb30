#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace vperc {

/// Calls fn(i) exactly once for every i in [0, n) on a fixed-size worker pool.
/// Callers store per-index results into preallocated slots, so aggregation in
/// index order is invariant to the worker count and to scheduling.
template <typename F>
void run_indexed(long long n, int workers, F&& fn) {
    if (n <= 0) return;
    const int nw = static_cast<int>(std::min<long long>(std::max(workers, 1), n));
    if (nw == 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const long long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Pairwise tree reduction in index order; the summation order is fixed by the
/// array layout, never by scheduling.
inline double tree_sum(std::span<const double> xs) {
    if (xs.size() <= 4) {
        double s = 0;
        for (const double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return tree_sum(xs.subspan(0, half)) + tree_sum(xs.subspan(half));
}

}  // namespace vperc
