#pragma once

#include <cstddef>
#include <functional>

namespace lagcalc {

/// Number of worker threads used by parallel loops. Defaults to the value of
/// the LAGCALC_THREADS environment variable, or 1 when unset.
int thread_count();

/// Overrides the worker count for the rest of the process (values < 1 clamp to 1).
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Iterations must be independent; each result
/// is written by exactly one iteration, so outputs do not depend on the
/// number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lagcalc
