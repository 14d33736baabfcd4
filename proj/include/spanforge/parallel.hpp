#pragma once

#include <cstddef>
#include <functional>

namespace spanforge {

/// Worker count: SPANFORGE_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls body(i) for every i in [0, count) on up to worker_count() threads.
/// Bodies must write only to slots indexed by i. The first exception thrown
/// by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace spanforge
