#pragma once

#include <cstddef>
#include <functional>

namespace exlq {

/// Number of worker threads. Reads EXLQ_WORKERS when set (clamped to >= 1);
/// otherwise uses the hardware concurrency. Results never depend on it.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on worker_count() threads in static blocks.
/// fn must only write to per-index state. The first exception thrown by any
/// worker is rethrown on the caller after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace exlq
