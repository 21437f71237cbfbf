#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace goldi {

inline int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Strided static scheduling; each index writes only its own output slot, so
// results are identical for any thread count.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& body) {
  if (threads <= 0) threads = hardware_threads();
  if (threads == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace goldi
