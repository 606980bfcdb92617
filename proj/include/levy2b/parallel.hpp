#pragma once

#include <cstdint>
#include <functional>

namespace levy2b {

/// Worker cap from LEVY2B_THREADS (0 or unset means hardware concurrency).
int worker_count();

/// Runs chunk_fn(begin, end) over a partition of [0, n). Workers write to
/// disjoint ranges only; any reduction is the caller's job and must be done
/// sequentially to keep results independent of the worker count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

}  // namespace levy2b
