#include "chebmap/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace chebmap {

int thread_budget() {
    if (const char* env = std::getenv("CHEBMAP_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 4u));
}

void parallel_chunks(int begin, int end, int threads,
                     const std::function<void(int, int)>& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    threads = std::clamp(threads, 1, n);
    if (threads == 1 || n < 64) {
        fn(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        int lo = begin + static_cast<int>(static_cast<long>(n) * t / threads);
        int hi = begin + static_cast<int>(static_cast<long>(n) * (t + 1) / threads);
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace chebmap
