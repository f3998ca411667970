#pragma once

#include <cstdint>
#include <random>

namespace srpcp::data {

/// Seeded generator with a fixed, platform-independent output stream.
///
/// Bits come from std::mt19937_64, whose sequence the C++ standard pins
/// down exactly. The conversions below are done by hand because the
/// standard distributions are implementation-defined:
///   uniform()  (bits >> 11) * 2^-53, in [0, 1)
///   normal()   Box-Muller on (1 - u1, u2), cosine branch first, then the
///              cached sine branch
///   below(n)   rejection sampling on the top of the 64-bit range
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  double uniform();
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// +1 or -1 with equal probability (top bit of one draw).
  double sign();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace srpcp::data
