#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace becpol {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk) for chunk = 0..n_chunks-1 on up to `threads` workers.
// Chunk boundaries are fixed by the caller independently of the worker
// count, and fn must write only chunk-local state, so results do not
// depend on --threads. The first exception thrown by any chunk is
// rethrown after all workers finish.
template <class Fn>
void for_each_chunk(std::uint64_t n_chunks, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n_chunks <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) return;
            try {
                fn(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    const auto n_workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_chunks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace becpol
