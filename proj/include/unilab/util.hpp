#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace unilab {

// UNIVERSALITY_LAB_THREADS caps internal parallelism (0 or unset = auto).
inline int thread_cap() {
  int cap = 0;
  if (const char* env = std::getenv("UNIVERSALITY_LAB_THREADS")) {
    try {
      cap = std::stoi(env);
    } catch (...) {
      cap = 0;
    }
  }
  if (cap <= 0) cap = int(std::thread::hardware_concurrency());
  return cap > 0 ? cap : 1;
}

// Strided row loop; outputs must go to disjoint slots so the partition does
// not affect results.
template <class F>
void parallel_for_rows(int rows, F&& body) {
  const int threads = std::min(thread_cap(), rows > 0 ? rows : 1);
  if (threads <= 1) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int r = t; r < rows; r += threads) body(r);
    });
  for (auto& th : pool) th.join();
}

} // namespace unilab
