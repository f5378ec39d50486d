#ifndef MAVDESIGN_PARALLEL_HPP
#define MAVDESIGN_PARALLEL_HPP

#include <functional>

namespace mavdesign {

/// Worker count: available parallelism capped by the MAVDESIGN_THREADS
/// environment variable (re-read on every call, minimum 1).
int worker_count();

/// Runs fn(i) for i in [0, n) on worker_count() threads with static block
/// partitioning. Callers own determinism: fn must write only to slot i.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(long n, const std::function<void(long)>& fn);

}  // namespace mavdesign

#endif  // MAVDESIGN_PARALLEL_HPP
