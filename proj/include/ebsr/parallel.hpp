#ifndef EBSR_PARALLEL_HPP
#define EBSR_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ebsr {

/// Worker cap read from EBSR_THREADS (default 1, invalid values ignored).
std::size_t thread_limit();

/// Runs task(i) for i in [0, count). Each task must write only its own
/// output slot; callers reduce the slots in index order afterwards so results
/// do not depend on scheduling.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)> &task);

} // namespace ebsr

#endif // EBSR_PARALLEL_HPP
