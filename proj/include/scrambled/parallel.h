#pragma once

#include <cstddef>
#include <functional>

namespace scrambled {

/// Number of worker threads used when `threads` is 0: hardware concurrency,
/// overridable with set_default_threads.
int default_threads();
void set_default_threads(int threads);

/// Calls fn(i) for i in [0, n) from a pool of workers pulling indices from a
/// shared counter. The first exception thrown by any call is rethrown after
/// all workers stop.
void parallel_for(size_t n, const std::function<void(size_t)> &fn, int threads = 0);

}  // namespace scrambled
