#pragma once

#include <cstddef>
#include <functional>

namespace flrw {

/// Worker count: hardware concurrency, capped by FLRW_DIRAC_THREADS if set.
int thread_count();

/// Runs fn(begin, end) over contiguous chunks of [0, n). Falls back to a
/// single call when n is small or only one worker is available.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t min_chunk = 4096);

}  // namespace flrw
