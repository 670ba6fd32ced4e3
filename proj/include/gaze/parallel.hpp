#pragma once

#include <cstddef>
#include <functional>

namespace gaze {

// Process-wide worker count for parallel sections. 0 means "use
// hardware_concurrency". Outputs never depend on this value: every parallel
// site derives per-index RNG streams and writes to per-index slots.
void set_worker_threads(unsigned n);
unsigned worker_threads();

// Runs fn(i) for i in [0, n). Work items must be independent; each writes
// only to its own slot. The first exception thrown by any item is rethrown
// on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gaze
