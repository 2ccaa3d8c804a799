#pragma once

#include <cstddef>
#include <functional>

namespace caplab {

/// Worker count: CAPACITY_LAB_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Callers write results into per-index slots and reduce in index order, so
/// outputs do not depend on the schedule. The first exception thrown by any
/// body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace caplab
