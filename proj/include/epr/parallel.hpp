#pragma once

#include <cstddef>
#include <functional>

namespace epr {

/// Worker count: EPR_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
/// handed out in contiguous blocks, so each result depends only on i and the
/// outcome is identical for any thread count. The first exception thrown by a
/// body is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace epr
