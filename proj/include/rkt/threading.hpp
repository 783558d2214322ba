#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace rkt {

// Thread count resolution: explicit argument wins, then the RKT_THREADS
// environment variable, then 1. Zero means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return requested;
}

inline unsigned default_threads() {
  if (const char* env = std::getenv("RKT_THREADS")) {
    const long v = std::atol(env);
    if (v >= 0) return resolve_threads(static_cast<unsigned>(v));
  }
  return 1;
}

// Runs fn(begin, end) over contiguous index chunks. Each index is processed by
// exactly one invocation, so writes to disjoint preallocated slots are
// deterministic regardless of the thread count.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace rkt
