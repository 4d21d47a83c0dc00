#pragma once

#include <cstddef>
#include <functional>

namespace fracschrod {

/// Worker count: FRACSCHROD_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on contiguous static chunks. Each index is
/// handled by exactly one worker, so writes to disjoint slots are race-free and
/// results do not depend on the worker count. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fracschrod
