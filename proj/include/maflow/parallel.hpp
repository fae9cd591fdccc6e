#pragma once

#include <cstddef>
#include <functional>

namespace maflow {

/// Worker count: MAFLOW_THREADS if set and positive, else the hardware concurrency.
int worker_count();

/// Runs body(begin, end) over a static partition of [0, count). Partitions are
/// fixed by count and worker_count(), so pointwise results are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace maflow
