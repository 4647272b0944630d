#pragma once

#include <cstdint>

namespace tpk {

// SplitMix64. State update: state += 0x9E3779B97F4A7C15; the output is the
// state passed through
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
// Pure integer arithmetic, so a seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double next_unit();
  // Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi);

  std::uint64_t state() const { return state_; }

  // Seed for an independent sub-stream, used for per-level / per-patch data.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
};

}  // namespace tpk
