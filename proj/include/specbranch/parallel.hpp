#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace specbranch {

// Worker count: hardware concurrency, capped by SPECTRAL_BRANCH_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, count). Each index is handled exactly once; the first exception
// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace specbranch
