#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rtnwalk {

/// Worker count used when the caller passes jobs <= 0.
inline int default_jobs()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/**
 * Calls body(i) for i in [0, count) on up to `jobs` threads, handing out
 * indices dynamically. body must only write to slot i of its outputs; results
 * are then independent of the thread count. The first exception thrown by a
 * worker is rethrown after all workers join.
 */
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body)
{
    if (jobs <= 0)
        jobs = default_jobs();
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(count);
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace rtnwalk
