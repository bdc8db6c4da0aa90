#pragma once

#include <cstddef>
#include <functional>

namespace infokernel {

/// Worker count: INFOKERNEL_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(begin, end) over fixed chunks of [0, n) of size `grain`.
///
/// Chunk boundaries depend only on n and grain, never on the worker count, so
/// callers that write per-index or per-chunk results get identical output for
/// any thread count. The first exception thrown by a chunk is rethrown.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of term(i) for i in [0, n), reduced chunk by chunk in index order.
double parallel_sum(std::size_t n, std::size_t grain, const std::function<double(std::size_t)>& term);

}  // namespace infokernel
