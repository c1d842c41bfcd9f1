#include "diracl2/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace diracl2 {

namespace {

std::atomic<int> g_thread_cap{0};

int resolved_cap() {
  int cap = g_thread_cap.load(std::memory_order_relaxed);
  if (cap > 0) return cap;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Executes all chunks of [0, count): serial when one worker suffices,
// otherwise a transient pool pulling chunk indices from a shared counter.
void run_chunks(Index count,
                const std::function<void(Index, Index, Index)>& fn) {
  const Index chunks = chunk_count(count);
  if (chunks == 0) return;
  const int workers =
      static_cast<int>(std::min<Index>(resolved_cap(), chunks));
  if (workers <= 1) {
    for (Index c = 0; c < chunks; ++c) {
      const Index b = c * kParallelChunk;
      fn(c, b, std::min(count, b + kParallelChunk));
    }
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr firstError;
  std::mutex errorMutex;
  auto worker = [&] {
    for (;;) {
      const Index c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      const Index b = c * kParallelChunk;
      try {
        fn(c, b, std::min(count, b + kParallelChunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(errorMutex);
        if (!firstError) firstError = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (firstError) std::rethrow_exception(firstError);
}

}  // namespace

void set_thread_cap(int cap) {
  if (cap < 0) throw config_error("thread cap must be >= 0");
  g_thread_cap.store(cap, std::memory_order_relaxed);
}

int thread_cap() { return g_thread_cap.load(std::memory_order_relaxed); }

void init_thread_cap_from_env() {
  const char* raw = std::getenv("DIRACL2_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 0 || v > 4096)
    throw config_error(std::string("DIRACL2_THREADS must be an integer in "
                                   "[0, 4096], got '") +
                       raw + "'");
  set_thread_cap(static_cast<int>(v));
}

void parallel_for_chunks(
    Index count, const std::function<void(Index, Index, Index)>& fn) {
  run_chunks(count, fn);
}

void parallel_for(Index count, const std::function<void(Index)>& fn) {
  run_chunks(count, [&](Index, Index b, Index e) {
    for (Index i = b; i < e; ++i) fn(i);
  });
}

double parallel_sum(Index count,
                    const std::function<double(Index, Index)>& partial) {
  const Index chunks = chunk_count(count);
  std::vector<double> parts(static_cast<size_t>(chunks), 0.0);
  run_chunks(count, [&](Index c, Index b, Index e) {
    parts[static_cast<size_t>(c)] = partial(b, e);
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

Eigen::VectorXd parallel_sum_vec(
    Index count, Index width,
    const std::function<void(Index, Index, Eigen::VectorXd&)>& accumulate) {
  const Index chunks = chunk_count(count);
  std::vector<Eigen::VectorXd> parts(static_cast<size_t>(chunks),
                                     Eigen::VectorXd::Zero(width));
  run_chunks(count, [&](Index c, Index b, Index e) {
    accumulate(b, e, parts[static_cast<size_t>(c)]);
  });
  Eigen::VectorXd total = Eigen::VectorXd::Zero(width);
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace diracl2
