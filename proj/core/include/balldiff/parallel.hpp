#pragma once

#include <cstddef>
#include <functional>

namespace balldiff {

// Run work(i) for i in [0, n) across the given number of threads (<= 0 means
// hardware concurrency).  Work items are claimed in fixed-size chunks from an
// atomic cursor; because every item is keyed by its own index (path id), the
// result of each call is identical for any thread count.  The first exception
// thrown by a worker is rethrown on the calling thread after all workers
// finish.
void parallel_paths(std::size_t n, int threads,
                    const std::function<void(std::size_t)>& work);

}  // namespace balldiff
