#include "pairscatter/seed.hpp"

namespace pairscatter {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
  // mix64 is a bijection, so distinct indices under one master seed never collide.
  return mix64(mix64(master_seed) + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

}  // namespace pairscatter
