#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sle {

/// Upper bound on worker threads used by parallel_for. 0 selects the
/// hardware concurrency. Results never depend on this value.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. The first exception
/// thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);

} // namespace sle
