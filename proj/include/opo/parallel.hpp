#pragma once

#include <cstddef>
#include <functional>

namespace opo {

/// Worker count: hardware concurrency, capped by OPO_WIGNER_THREADS when set.
unsigned worker_count(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Work items are
/// handed out dynamically; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers);

}  // namespace opo
