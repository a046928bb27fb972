#pragma once

#include <cstddef>
#include <functional>

namespace seqalloc {

/// Worker count from $SEQALLOC_THREADS when set to a positive integer,
/// otherwise std::thread::hardware_concurrency() (at least 1).
unsigned default_thread_count();

/// Calls body(i) for every i in [0, n) on up to `threads` workers (0 means
/// default_thread_count()). Indices are handed out dynamically, so body must
/// only write to slots owned by i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) sum; the result depends only on the order of `values`.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace seqalloc
