#pragma once

#include <cstddef>
#include <functional>

namespace lacvar {

/// Worker count: hardware concurrency, capped by LACVAR_THREADS when set.
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on the schedule. The first exception thrown by
/// any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lacvar
