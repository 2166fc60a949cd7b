#pragma once

#include <cstddef>
#include <functional>

namespace qmc {

// Worker count for internal parallel loops. QMC_THREADS caps it;
// 0 or unset means hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, count). Each index is handled exactly once and
// results must be written to disjoint slots, so the outcome is identical
// for any worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace qmc
