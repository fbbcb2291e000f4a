#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace stable_stein {

// Worker count: explicit request > STABLE_STEIN_THREADS > hardware concurrency.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("STABLE_STEIN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs body(begin, end) over fixed-size blocks of [0, total). Blocks are
// handed out through an atomic cursor, so the partitioning (and therefore
// any per-index output) is identical for every worker count; only disjoint
// output slots may be written from body.
template <typename Body>
void parallel_blocks(std::size_t total, std::size_t block, int threads, Body&& body) {
    threads = resolve_threads(threads);
    if (total == 0) return;
    const std::size_t nblocks = (total + block - 1) / block;
    if (threads <= 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            body(b * block, std::min(total, (b + 1) * block));
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t b = cursor.fetch_add(1);
            if (b >= nblocks) return;
            try {
                body(b * block, std::min(total, (b + 1) * block));
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(first_error);
}

}  // namespace stable_stein
