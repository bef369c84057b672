#ifndef TPS_PARALLEL_HPP
#define TPS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace tps {

/// Worker-pool size: TPS_THREADS when set (clamped to >= 1), otherwise the
/// hardware concurrency.
std::size_t thread_budget();

/// Run fn(begin, end) over a partition of [0, n) on up to thread_budget()
/// threads. Chunks are contiguous and the partition depends only on n and
/// the thread budget, never on scheduling; callers must write to disjoint
/// state per index so results are schedule-independent.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace tps

#endif // TPS_PARALLEL_HPP
