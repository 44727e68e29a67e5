#pragma once

#include <cstddef>
#include <functional>

namespace solarcast {

/// Worker count used when a call does not pass one explicitly. Initialized
/// from SOLARCAST_THREADS, else hardware concurrency. A value of 1 runs
/// everything inline on the calling thread.
std::size_t default_threads();
void set_default_threads(std::size_t n);

/// Runs body(i) for i in [0, n). Work items must write only to their own
/// slots; results are therefore identical for every thread count.
/// The first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace solarcast
