#include <cmath>
#include <numbers>
#include <stdexcept>

#include "srpcp/rng.hpp"

namespace srpcp::data {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Reject the lowest (2^64 mod n) values so the remainder is unbiased.
  const std::uint64_t floor = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= floor) return x % n;
  }
}

double Rng::sign() { return (engine_() >> 63) != 0 ? -1.0 : 1.0; }

}  // namespace srpcp::data
