#ifndef H2PC_PARALLEL_HPP
#define H2PC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace h2pc {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index runs
/// exactly once; callers write results into per-index slots so output never
/// depends on scheduling. The first exception thrown is rethrown.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
    jobs = std::clamp(jobs, 1, std::max(count, 1));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace h2pc

#endif  // H2PC_PARALLEL_HPP
