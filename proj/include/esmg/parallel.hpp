#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace esmg {

/// Worker cap: ESMGAUNTLET_THREADS when set, else hardware concurrency.
inline int thread_cap() {
  if (const char* env = std::getenv("ESMGAUNTLET_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

/// Runs fn(0..n-1) on up to thread_cap() workers. Results must be written to
/// disjoint slots; ordering is otherwise irrelevant (all library operations
/// are pure).
inline void parallel_for(long n, const std::function<void(long)>& fn) {
  const int workers = std::min<long>(thread_cap(), n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace esmg
