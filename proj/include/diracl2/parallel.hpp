#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "diracl2/common.hpp"

namespace diracl2 {

// ============================ worker pool cap ============================
//
// All parallel loops below split work into chunks of a fixed size and, for
// reductions, combine per-chunk partial results in chunk order.  Because the
// chunk geometry never depends on the worker count, raising or lowering the
// cap changes wall time but not a single output bit.

// 0 means "pick automatically" (hardware concurrency).
void set_thread_cap(int cap);
int thread_cap();

// Reads DIRACL2_THREADS from the environment, if set, and installs it as the
// cap.  Invalid values raise config_error.
void init_thread_cap_from_env();

// Fixed chunk width used by every parallel loop and ordered reduction.
inline constexpr Index kParallelChunk = 4096;

inline Index chunk_count(Index count) {
  return count <= 0 ? 0 : (count + kParallelChunk - 1) / kParallelChunk;
}

// Runs fn(chunkIndex, begin, end) over [0, count) split into kParallelChunk
// blocks.  fn must only write to locations owned by its own range (or its
// own chunk slot); chunks may execute concurrently and in any order.
void parallel_for_chunks(
    Index count, const std::function<void(Index, Index, Index)>& fn);

// Convenience: element-wise loop, fn(i) for i in [0, count).
void parallel_for(Index count, const std::function<void(Index)>& fn);

// Ordered reduction to a double: partial sums are produced per chunk and
// added together in ascending chunk order, so the result is independent of
// the worker count.
double parallel_sum(Index count,
                    const std::function<double(Index, Index)>& partial);

// Ordered reduction of fixed-size vectors (one slot per chunk, combined in
// chunk order).  `accumulate(begin, end, acc)` adds a range's contribution
// into its chunk's accumulator, which starts at zero.
Eigen::VectorXd parallel_sum_vec(
    Index count, Index width,
    const std::function<void(Index, Index, Eigen::VectorXd&)>& accumulate);

}  // namespace diracl2
