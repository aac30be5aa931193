// Minimal fork-join helper. The SYNERGY_LAB_THREADS environment variable caps
// the worker count (default: hardware concurrency).
#pragma once

#include <cstddef>
#include <functional>

namespace synergy {

std::size_t thread_count();

/// Calls body(i) for every i in [0, n), splitting the range into contiguous
/// chunks across worker threads. Each index is visited exactly once, so the
/// result is independent of the worker count whenever body(i) only writes
/// slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace synergy
