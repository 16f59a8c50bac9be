#pragma once

#include <cstddef>
#include <functional>

namespace hyperlab {

/// Worker count used when a caller passes threads = 0.
int default_threads();
void set_default_threads(int threads);

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results by index, so the outcome does
/// not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace hyperlab
