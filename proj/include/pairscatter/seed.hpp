#pragma once

#include <cstdint>

namespace pairscatter {

// Counter-based seed for one realization: a pure function of the master
// seed and the realization index (SplitMix64 finalizer over a Weyl step),
// so any parallel partition of the ensemble sees the same disorder.
std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace pairscatter
