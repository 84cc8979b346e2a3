#pragma once

#include <cstddef>
#include <functional>

namespace oped {

/// Worker count: explicit value if positive, else OPED_THREADS, else hardware concurrency.
int resolve_threads(int requested);

/// Runs body(begin, end) over [0, count) in contiguous chunks on up to `threads`
/// workers. Chunk boundaries never affect what a single index computes.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace oped
