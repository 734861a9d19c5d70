#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace invrod {

// Chunked parallel loop. Each index is processed exactly once and results are
// written to per-index slots, so the outcome is identical for any thread
// count; callers reduce serially afterwards.
template <typename Fn>
void parallel_for(int n, int threads, Fn &&fn) {
    if (threads <= 1 || n < 64) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const int nt = std::min<int>(threads, std::max(1, n / 16));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const int lo = static_cast<int>(static_cast<long long>(n) * t / nt);
        const int hi = static_cast<int>(static_cast<long long>(n) * (t + 1) / nt);
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto &th : pool)
        th.join();
}

// Assembly thread cap from INVROD_THREADS (defaults to serial).
int assembly_threads();

} // namespace invrod
