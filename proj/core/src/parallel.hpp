#pragma once

#include <cstddef>
#include <functional>

namespace spa::detail {

// Worker count: SPA_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, count) across workers. Items are independent; the
// caller indexes its own output so results land in input order regardless of
// scheduling. Exceptions are captured and rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace spa::detail
