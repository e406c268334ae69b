#pragma once

#include <cstddef>
#include <functional>

namespace repstab {

/// Worker count: REPSTAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads, in
/// contiguous chunks. Exceptions thrown by fn are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// max_i fn(i) over [0, count), 0 for an empty range.
double parallel_max(std::size_t count, const std::function<double(std::size_t)>& fn);

}  // namespace repstab
