#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hinv {

inline int default_workers()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Calls fn(begin, end, worker) on `workers` contiguous chunks of [0, n).
/// Chunk boundaries depend only on (n, workers). The first exception thrown by
/// any worker is rethrown on the calling thread.
template <class F>
void parallel_chunks(std::size_t n, int workers, F&& fn)
{
    workers = std::max(1, workers);
    const auto w = static_cast<std::size_t>(workers);
    auto chunk_begin = [n, w](std::size_t i) { return n * i / w; };
    if (workers == 1 || n < 2) {
        fn(std::size_t{0}, n, 0);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t i = 0; i < w; ++i) {
        pool.emplace_back([&, i] {
            try {
                fn(chunk_begin(i), chunk_begin(i + 1), static_cast<int>(i));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace hinv
