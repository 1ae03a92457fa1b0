#pragma once

#include <cstddef>
#include <functional>

namespace rpbeats {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// visited exactly once; results must be written to per-index slots.
// The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace rpbeats
