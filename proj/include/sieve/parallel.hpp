#pragma once

#include <functional>

namespace sieve {

/// Process-global worker count used by parallel_for_rows. 0 restores the
/// hardware default. Results never depend on this value: work items write to
/// disjoint slots and reductions happen in a fixed order afterwards.
void set_thread_count(int n);
int thread_count();

/// Run fn(lo, hi) over a partition of [0, n). Chunks are contiguous; the
/// callback must only touch state owned by its rows.
void parallel_for_rows(int n, const std::function<void(int, int)>& fn);

}  // namespace sieve
