#include "sieve/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sieve {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

int thread_count() {
  int n = g_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for_rows(int n, const std::function<void(int, int)>& fn) {
  int t = std::min(thread_count(), n);
  if (t <= 1 || n <= 1) {
    if (n > 0) fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  int base = n / t, rem = n % t, lo = 0;
  for (int w = 0; w < t; ++w) {
    int hi = lo + base + (w < rem ? 1 : 0);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    lo = hi;
  }
  for (auto& th : pool) th.join();
}

}  // namespace sieve
