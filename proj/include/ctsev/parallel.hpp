#pragma once

#include <cstddef>
#include <functional>

namespace ctsev {

// Worker count used when a caller passes 0: the CTSEV_WORKERS environment
// variable if set to a positive integer, otherwise hardware concurrency.
std::size_t default_workers();

// Runs body(i) for every i in [0, count) on up to `workers` threads
// (0 = default_workers()). Indices are claimed dynamically, so `body` must
// not depend on which thread runs it. The first exception thrown by any
// invocation is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace ctsev
