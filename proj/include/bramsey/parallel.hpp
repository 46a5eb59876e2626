#pragma once

// Minimal fork-join helpers over index ranges. Results never depend on the
// thread count: work is split into contiguous chunks and merged in order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace bramsey {

inline constexpr const char* kThreadsEnv = "BUILDING_RAMSEY_THREADS";

/// Explicit request if positive, else the environment variable, else the number of logical cores.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kThreadsEnv)) {
        try {
            const int value = std::stoi(env);
            if (value > 0) return value;
        } catch (const std::exception&) {
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Calls body(begin, end) on contiguous chunks of [0, n). Exceptions propagate.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    threads = std::max(1, threads);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        if (n) body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Smallest index in [0, n) satisfying pred, scanning in parallel.
template <class Pred>
std::optional<std::size_t> parallel_find_first(std::size_t n, int threads, Pred&& pred) {
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> best{none};
    constexpr std::size_t block = 256;
    const std::size_t blocks = (n + block - 1) / block;
    std::atomic<std::size_t> next_block{0};
    auto worker = [&](std::size_t, std::size_t) {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= blocks || b * block >= best.load()) return;
            const std::size_t end = std::min(n, (b + 1) * block);
            for (std::size_t i = b * block; i < end; ++i) {
                if (i >= best.load()) return;
                if (pred(i)) {
                    std::size_t current = best.load();
                    while (i < current && !best.compare_exchange_weak(current, i)) {
                    }
                    return;
                }
            }
        }
    };
    parallel_for(static_cast<std::size_t>(std::max(1, threads)), threads, worker);
    if (best.load() == none) return std::nullopt;
    return best.load();
}

}  // namespace bramsey
