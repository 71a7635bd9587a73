#pragma once

#include <cstddef>
#include <functional>

namespace sbic {

/// Worker count: SBIC_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

/// Calls body(k) for k in [0, count) on up to `threads` workers. Work items
/// must write to disjoint outputs; the first exception thrown is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace sbic
