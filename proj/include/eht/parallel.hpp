#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace eht {

// Worker count for setting-parallel sums: the EHT_WORKERS environment
// variable overrides, otherwise the hardware concurrency, never below 1.
inline int worker_count() {
  if (const char* env = std::getenv("EHT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Folds indices [0, n) into per-worker copies of `init` over contiguous
// blocks, then merges the copies in block order. Deterministic for a fixed
// worker count; fold and merge must not throw.
template <class Acc, class Fold, class Merge>
Acc parallel_reduce(std::size_t n, Acc init, Fold fold, Merge merge) {
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(worker_count()), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fold(init, i);
    return init;
  }
  std::vector<Acc> parts(workers, init);
  const std::size_t chunk = (n + workers - 1) / workers;
  {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&parts, &fold, w, chunk, n] {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fold(parts[w], i);
      });
    }
    for (auto& t : threads) t.join();
  }
  Acc total = std::move(parts.front());
  for (std::size_t w = 1; w < workers; ++w) merge(total, parts[w]);
  return total;
}

}  // namespace eht
