#pragma once

// Exact integer helpers shared by the CRT, plan and grid code.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trigeq {

/// 128-bit integer used wherever plan frequencies or modular products can
/// leave the int64 range.
__extension__ typedef __int128 Wide;

/// Raised when an operation's precondition on its inputs does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal identity that must hold by construction fails.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Nonnegative remainder of a modulo m (m > 0).
std::int64_t mod64(std::int64_t a, std::int64_t m);
Wide mod_wide(Wide a, Wide m);

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);

/// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

/// Floor and ceiling division for signed 128-bit values (b != 0).
Wide floor_div(Wide a, Wide b);
Wide ceil_div(Wide a, Wide b);

/// Returns g = gcd(a, b) >= 0 with a*x + b*y = g.
Wide extended_gcd(Wide a, Wide b, Wide& x, Wide& y);

/// Finite arithmetic progression {base + step*j : lo <= j <= hi}, step > 0.
struct Progression {
  Wide base = 0;
  Wide step = 1;
  Wide lo = 0;
  Wide hi = 0;

  Wide first() const { return base + step * lo; }
  Wide last() const { return base + step * hi; }
};

/// Exact test for a common element.
bool progressions_meet(const Progression& u, const Progression& v);
/// Same test with g = gcd(u.step, v.step) and u.step * x = g (mod v.step)
/// precomputed.
bool progressions_meet(const Progression& u, const Progression& v, Wide g, Wide x);

bool fits_int64(Wide v);
std::int64_t narrow_int64(Wide v);

std::string to_string(Wide v);
Wide parse_wide(const std::string& text);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::int64_t n);

/// Smallest prime >= n.
std::int64_t next_prime(std::int64_t n);

}  // namespace trigeq
