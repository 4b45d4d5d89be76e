#include "balldiff/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace balldiff {

void parallel_paths(std::size_t n, int threads,
                    const std::function<void(std::size_t)>& work) {
    if (n == 0) return;
    unsigned want = threads > 0 ? static_cast<unsigned>(threads)
                                : std::thread::hardware_concurrency();
    if (want == 0) want = 1;
    constexpr std::size_t kChunk = 64;
    if (want == 1 || n <= kChunk) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t begin = cursor.fetch_add(kChunk);
            if (begin >= n) return;
            const std::size_t end = std::min(begin + kChunk, n);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned t = 0; t < want; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace balldiff
