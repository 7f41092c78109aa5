#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xi {

/// Runs fn(task, worker) for task in [0, n_tasks) on `workers` threads.
/// Tasks are claimed from a shared counter; `stop` (checked before each
/// claim) ends the run early. Returns the number of tasks claimed, which
/// are all complete on return. The first exception thrown by a task is
/// rethrown after all threads join.
template <class Fn, class Stop>
std::size_t parallel_tasks(std::size_t n_tasks, unsigned workers, Fn&& fn, Stop&& stop) {
    workers = std::max(1u, workers);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto body = [&](unsigned worker) {
        while (!failed.load(std::memory_order_relaxed) && !stop()) {
            const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
            if (task >= n_tasks) break;
            try {
                fn(task, worker);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return std::min(next.load(), n_tasks);
}

template <class Fn>
std::size_t parallel_tasks(std::size_t n_tasks, unsigned workers, Fn&& fn) {
    return parallel_tasks(n_tasks, workers, std::forward<Fn>(fn), [] { return false; });
}

}  // namespace xi
