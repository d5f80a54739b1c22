#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qstable {

// How much parallelism independent work items may use. threads <= 1 means
// strictly sequential.
struct ExecPolicy {
    int threads = 1;
};

// Runs fn(0..count-1), possibly concurrently. Results must be written to
// pre-sized slots so output order never depends on scheduling. The first
// exception (by task index) is rethrown after all workers join.
inline void parallel_for(std::size_t count, const ExecPolicy& exec,
                         const std::function<void(std::size_t)>& fn) {
    const int threads = exec.threads;
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace qstable
