#pragma once

#include <cstddef>
#include <functional>

namespace polyheat {

/// Worker count: POLYHEAT_THREADS if set (0 = hardware concurrency), else 1.
int thread_count();

/// Runs fn(i) for i in [0, n). Work items must write disjoint state; iteration
/// order is unspecified, so results must not depend on it.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace polyheat
