#pragma once

#include <functional>

namespace contact {

// Worker count: CONTACT_RADIUS_THREADS if set and positive, otherwise the
// hardware concurrency (0 in the variable also means auto).
int thread_count();

// Runs fn(0..n-1) across worker threads. Results must be written to
// per-index slots by the caller; if several indices throw, the exception of
// the lowest index is rethrown so failures are reproducible.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace contact
