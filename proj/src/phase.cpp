#include "trigeq/phase.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "trigeq/arith.hpp"

namespace trigeq {

Phase::Phase(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::domain_error("Phase: denominator must be positive");
  num = mod64(num, den);
  std::int64_t g = gcd64(num, den);
  if (g == 0) g = den;
  num_ = num / g;
  den_ = den / g;
}

Phase Phase::operator*(const Phase& other) const {
  std::int64_t g = gcd64(den_, other.den_);
  std::int64_t den = checked_mul(den_ / g, other.den_);
  Wide num = static_cast<Wide>(num_) * (den / den_) + static_cast<Wide>(other.num_) * (den / other.den_);
  return {static_cast<std::int64_t>(mod_wide(num, den)), den};
}

Phase Phase::conj() const { return {den_ - num_, den_}; }

Phase Phase::pow(std::int64_t e) const { return {mul_mod(num_, mod64(e, den_), den_), den_}; }

std::complex<double> Phase::value() const {
  // Quarter turns are returned exactly.
  if ((static_cast<Wide>(num_) * 4) % den_ == 0) {
    switch (static_cast<int>((static_cast<Wide>(num_) * 4) / den_)) {
      case 0:
        return {1.0, 0.0};
      case 1:
        return {0.0, 1.0};
      case 2:
        return {-1.0, 0.0};
      default:
        return {0.0, -1.0};
    }
  }
  // Use the representative in (-1/2, 1/2] for a small argument.
  long double t = static_cast<long double>(num_) / static_cast<long double>(den_);
  if (2 * num_ > den_) t -= 1.0L;
  const long double angle = 2.0L * std::numbers::pi_v<long double> * t;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::complex<double> unit_turn(long double t) {
  t -= std::floor(t);
  if (t > 0.5L) t -= 1.0L;
  const long double angle = 2.0L * std::numbers::pi_v<long double> * t;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

}  // namespace trigeq
