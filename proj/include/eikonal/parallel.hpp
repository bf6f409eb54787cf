#pragma once

#include <cstddef>
#include <functional>

namespace eik {

/// Worker count from EIKONAL_THREADS, else the hardware concurrency.
unsigned thread_count();

/// Run fn(0..n-1) across thread_count() workers. Each index runs exactly
/// once; callers write results by index so output order never depends on
/// scheduling. The first exception thrown by fn is rethrown after joining.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace eik
