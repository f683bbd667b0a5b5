#pragma once

#include <cstddef>
#include <functional>

namespace orlisov::parallel {

/// Worker cap: ORLISOV_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs body(chunk) for chunk in [0, n_chunks). Chunks are claimed
/// dynamically, so callers must write results into per-chunk slots and
/// combine them afterwards in chunk order; that keeps every reduction
/// independent of the number of workers.
void for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& body);

}  // namespace orlisov::parallel
