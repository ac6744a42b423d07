#pragma once

#include <cstddef>
#include <functional>

namespace cqed {

// Runs body(i) for i in [0, n). With threads == 0 the hardware thread count
// is used; threads == 1 forces serial execution. Nested calls run serially,
// so sweeps can parallelize at the outermost level only. The first exception
// thrown by any worker is rethrown on the calling thread after all workers
// join. Callers must write results into index-addressed slots; reductions
// happen afterwards in index order, so results do not depend on the thread
// count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace cqed
