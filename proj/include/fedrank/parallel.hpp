#pragma once

#include <cstddef>
#include <functional>

namespace fedrank {

/// Worker count: FEDRANK_THREADS if set and positive, otherwise hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks; callers
/// write results into per-index slots and reduce afterwards in index order, so
/// results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel = 256);

}  // namespace fedrank
