#pragma once

#include <cstdint>
#include <functional>

namespace errdyn {

// Worker count: LIE_ERRDYN_THREADS when set to a positive integer, otherwise
// std::thread::hardware_concurrency() (min 1).
int thread_budget();

// Runs fn(i) for i in [0, n) across the thread budget. Index order within a
// worker is ascending; results must go into per-index slots so the output is
// independent of the schedule. First exception wins and is rethrown.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace errdyn
