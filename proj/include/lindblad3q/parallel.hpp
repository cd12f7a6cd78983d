#pragma once

#include <cstddef>
#include <functional>

namespace lindblad3q {

// Worker count: min(hardware_concurrency, LINDBLAD3Q_THREADS if set).
int worker_count();

// Runs fn(i) for i in [0, n). Contiguous chunks, no reduction: callers that
// need deterministic output must write per-index results and reduce serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lindblad3q
