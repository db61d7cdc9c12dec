#pragma once

// Deterministic data-parallel loop. Work items write to caller-owned slots
// keyed by index and every item derives its own RNG from the index, so the
// result is identical for any thread count. GMACWT_THREADS caps the pool.

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace gmacwt {

inline int thread_budget() {
    if (const char* env = std::getenv("GMACWT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t threads =
        std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t begin = count * t / threads;
            const std::size_t end = count * (t + 1) / threads;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace gmacwt
