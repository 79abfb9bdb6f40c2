#pragma once

#include <compare>
#include <complex>
#include <cstdint>

namespace trigeq {

/// Exact root of unity exp(2*pi*i*num/den), kept as a reduced fraction of a
/// full turn with 0 <= num < den.
///
/// Two phases that denote the same point of the circle compare equal, and
/// value() is a pure function of the reduced fraction, so equal phases map
/// to bit-identical complex numbers.
class Phase {
 public:
  Phase() = default;
  Phase(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_one() const { return num_ == 0; }

  Phase operator*(const Phase& other) const;
  Phase conj() const;
  Phase pow(std::int64_t e) const;

  std::complex<double> value() const;

  auto operator<=>(const Phase&) const = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// exp(2*pi*i*t) for a real turn count t; reduces t mod 1 first.
std::complex<double> unit_turn(long double t);

}  // namespace trigeq
