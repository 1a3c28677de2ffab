#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace robust_trim {

// Worker count: ROBUST_TRIM_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t thread_budget();

// Runs fn(0) ... fn(count - 1) on up to `threads` workers. Each index runs
// exactly once; the first exception thrown by any task is rethrown after all
// workers have joined.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

// SplitMix64 finalizer; used to derive independent RNG seeds from (seed, stream).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace robust_trim
