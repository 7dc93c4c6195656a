#pragma once

#include <functional>

namespace chebmap {

// Worker count for internal parallelism. CHEBMAP_THREADS caps it; results of
// every parallel routine in this library are bitwise independent of the count.
int thread_budget();

// Splits [begin, end) into at most `threads` contiguous chunks and runs
// fn(chunk_begin, chunk_end) on each. Runs inline when threads <= 1 or the
// range is small.
void parallel_chunks(int begin, int end, int threads,
                     const std::function<void(int, int)>& fn);

}  // namespace chebmap
