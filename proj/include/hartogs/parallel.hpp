#pragma once

#include <cstddef>
#include <functional>

namespace hartogs {

/// Worker count used by the parallel loops. Defaults to HARTOGS_THREADS from
/// the environment, else the hardware concurrency.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// Iterations must be independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace hartogs
