#pragma once

#include <functional>

namespace normlab {

/// Worker cap: LAB_THREADS environment variable if set (minimum 1),
/// otherwise hardware concurrency clamped to 8.
int max_workers();

/// Runs fn(c) for c in [0, chunk_count), possibly concurrently.
///
/// Chunk boundaries are fixed by the caller and never depend on the worker
/// count, so any reduction done per chunk and merged in chunk order yields
/// results independent of how many threads actually ran.
void parallel_chunks(int chunk_count, const std::function<void(int)>& fn);

}  // namespace normlab
