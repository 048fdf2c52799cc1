#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lavlab {

// Applies the LAVLAB_THREADS environment variable (if set) as an upper bound
// on the OpenMP thread count.  No-op when the variable is absent.
void apply_thread_env();

int max_threads();

// Deterministic sum of per-item contributions: callers fill a buffer indexed
// by work item (in parallel) and the reduction always runs in index order, so
// results are bit-stable across thread counts.
double ordered_sum(const std::vector<double>& buf);

// Splitmix-style hash for seeding per-work-item RNGs independently of the
// execution schedule.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t item);

}  // namespace lavlab
