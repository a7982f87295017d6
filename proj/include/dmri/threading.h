#pragma once

#include <cstddef>
#include <functional>

namespace dmri {

// Worker cap: set_thread_count() if set, else DMRI_THREADS, else hardware.
int thread_count();
void set_thread_count(int n);  // 0 restores auto detection

// Runs fn(begin, end) over a deterministic contiguous partition of [0, n).
// Output must depend only on the range, not on worker identity or timing.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn);

}  // namespace dmri
