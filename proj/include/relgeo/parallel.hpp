#pragma once

#include <cstddef>
#include <functional>

namespace relgeo {

// worker count: RELGEO_THREADS env var caps hardware concurrency
int thread_count();

// Runs fn(i) for i in [0, count), fanned out over worker threads. Callers
// write results by index, so output ordering is independent of scheduling.
// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace relgeo
