// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>

namespace sasakilab {

/// Worker count: hardware concurrency capped by SASAKILAB_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is processed exactly once;
/// callers write results to slot i so output order never depends on scheduling.
/// The first exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sasakilab
