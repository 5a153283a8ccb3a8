#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tfet {

// Worker count used when a caller passes threads <= 0: set_default_threads(),
// else $TFETSIM_THREADS, else 1.
int default_threads();
void set_default_threads(int n);

// Runs f(k) for k in [0, n) on up to `threads` workers. Work items must write
// only to their own slots; callers reduce afterwards in index order so results
// do not depend on the worker count. The first exception is rethrown.
template <typename F>
void parallel_for(std::size_t n, int threads, F && f) {
    if (threads <= 0) threads = default_threads();
    auto workers = static_cast<std::size_t>(std::max(1, threads));
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) f(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    auto run = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < n;) {
            try {
                f(k);
            } catch (...) {
                std::lock_guard lock(error_lock);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto & t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace tfet
