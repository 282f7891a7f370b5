#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nid {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must be
/// independent; results are expected to be written to per-index slots. The
/// first exception (lowest index) is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = n;
    std::exception_ptr error;
    auto work = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < std::min(workers, n); ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace nid
