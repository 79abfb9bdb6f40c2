#include "trigeq/arith.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace trigeq {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b < 0 ? -b : b);
}

std::int64_t mod64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Wide mod_wide(Wide a, Wide m) {
  Wide r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(mod_wide(static_cast<Wide>(a) * b, m));
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  Wide old_r = mod64(a, m), r = m;
  Wide old_s = 1, s = 0;
  while (r != 0) {
    Wide q = old_r / r;
    Wide t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("inverse_mod: arguments are not coprime");
  return static_cast<std::int64_t>(mod_wide(old_s, m));
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("int64 multiplication overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("int64 addition overflow");
  return out;
}

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Wide ceil_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

Wide extended_gcd(Wide a, Wide b, Wide& x, Wide& y) {
  Wide x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const Wide q = a / b;
    Wide t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

bool progressions_meet(const Progression& u, const Progression& v) {
  Wide x = 0, y = 0;
  const Wide g = extended_gcd(u.step, v.step, x, y);
  return progressions_meet(u, v, g, x);
}

bool progressions_meet(const Progression& u, const Progression& v, Wide g, Wide x) {
  if (u.lo > u.hi || v.lo > v.hi) return false;
  if (u.first() > v.last() || v.first() > u.last()) return false;
  // u.base + u.step * i = v.base + v.step * j
  const Wide diff = v.base - u.base;
  if (diff % g != 0) return false;
  const Wide su = v.step / g;
  const Wide sv = u.step / g;
  const Wide i0 = mod_wide(mod_wide(x, su) * mod_wide(diff / g, su), su);
  const Wide j0 = (u.base + u.step * i0 - v.base) / v.step;
  const Wide t_lo = std::max(ceil_div(u.lo - i0, su), ceil_div(v.lo - j0, sv));
  const Wide t_hi = std::min(floor_div(u.hi - i0, su), floor_div(v.hi - j0, sv));
  return t_lo <= t_hi;
}

bool fits_int64(Wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t narrow_int64(Wide v) {
  if (!fits_int64(v)) throw std::overflow_error("value " + to_string(v) + " exceeds int64 range");
  return static_cast<std::int64_t>(v);
}

std::string to_string(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // Work on the negative side so the minimum value does not overflow.
  if (!neg) v = -v;
  std::string digits;
  while (v != 0) {
    int d = static_cast<int>(-(v % 10));
    digits.push_back(static_cast<char>('0' + d));
    v /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Wide parse_wide(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = 0;
  bool neg = false;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("malformed integer literal '" + text + "'");
  Wide v = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw std::invalid_argument("malformed integer literal '" + text + "'");
    Wide next = v * 10 - (c - '0');
    if (next > v) throw std::overflow_error("integer literal out of range");
    v = next;
  }
  return neg ? v : -v;
}

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1U) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1U;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (static_cast<std::uint64_t>(n) == p) return true;
    if (static_cast<std::uint64_t>(n) % p == 0) return false;
  }
  std::uint64_t d = static_cast<std::uint64_t>(n) - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  const auto un = static_cast<std::uint64_t>(n);
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, un);
    if (x == 1 || x == un - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % un);
      if (x == un - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::int64_t next_prime(std::int64_t n) {
  if (n <= 2) return 2;
  for (std::int64_t c = n;; ++c) {
    if (is_prime(c)) return c;
  }
}

}  // namespace trigeq
