#pragma once

#include <cstddef>
#include <functional>

namespace langevin {

/// Number of worker threads to use: hardware concurrency, capped by the
/// LANGEVIN_LAB_THREADS environment variable when it holds a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = worker_count()).
/// Work is split into contiguous blocks; body must not share mutable state.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

}  // namespace langevin
