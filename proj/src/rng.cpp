#include "tokenpacker/rng.h"

namespace tpk {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

double Rng::next_unit() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  return mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL));
}

}  // namespace tpk
