#pragma once

#include <cstddef>
#include <functional>

namespace obl {

/// Worker cap: OBL_THREADS when set to a positive integer, else the
/// machine's hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Work is
/// handed out in index order; callers write results into per-index slots so
/// the merged output does not depend on scheduling. The first exception
/// thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace obl
