#pragma once

#include <cstdint>
#include <random>

namespace capreq {

/// SplitMix64 mixer. Used to derive independent per-item seeds from a
/// master seed, so batch work items can be scheduled in any order (or on
/// any thread) and still draw identical random streams.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for work item `index` of a batch rooted at `seed`.
inline std::uint64_t item_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(seed ^ splitmix64(index + 0x51ed2701a9b5d4f3ULL));
}

/// Engine for one work item: deterministic regardless of scheduling.
inline std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index)
{
    return std::mt19937_64(item_seed(seed, index));
}

} // namespace capreq
