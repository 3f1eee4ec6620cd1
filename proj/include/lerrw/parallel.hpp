#pragma once

#include <cstddef>
#include <functional>

namespace lerrw {

/// 0 means "one per hardware thread".
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
/// are claimed dynamically, so callers must write results to per-index slots
/// and aggregate afterwards in index order. The first exception thrown by a
/// work item is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace lerrw
