#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fairscope {

/// Resolve a worker count: explicit request, then FAIRSCOPE_THREADS, then
/// the hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0)
{
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("FAIRSCOPE_THREADS"); env != nullptr) {
        try {
            const int parsed = std::stoi(env);
            if (parsed > 0) {
                return static_cast<unsigned>(parsed);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count). Each index writes only its own result
/// slot, so output never depends on scheduling. The first exception thrown
/// by any task is rethrown on the calling thread.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    const auto n_workers = std::min<std::size_t>(threads, count);
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace fairscope
