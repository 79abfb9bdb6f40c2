#pragma once

// Discrete trigonometric systems: the step functions
//   t_n^{(l)}(x) = exp(2*pi*i*n*k/l)  for x in [k/l, (k+1)/l),
// their tensor products, Fourier coefficients and truncated approximants.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "trigeq/arith.hpp"
#include "trigeq/phase.hpp"
#include "trigeq/trig_poly.hpp"

namespace trigeq {

/// Multiple DTS of per-axis orders p_1..p_d; a one-dimensional system has a
/// single axis with p_1 = l.
class DiscreteTrigSystem {
 public:
  explicit DiscreteTrigSystem(std::vector<std::int64_t> axis_orders);
  static DiscreteTrigSystem of_order(std::int64_t l) { return DiscreteTrigSystem({l}); }

  std::size_t dim() const { return orders_.size(); }
  std::int64_t order() const { return order_; }
  const std::vector<std::int64_t>& axis_orders() const { return orders_; }

  /// Value of t_{n_vec} on the cell with per-axis indices cell, exactly.
  Phase phase_at_cell(std::span<const std::int64_t> n_vec, std::span<const std::int64_t> cell) const;

  std::complex<double> value(std::span<const std::int64_t> n_vec, std::span<const double> x) const;

  /// Exact discrete inner product <t_n, t_m> over the cells.
  std::complex<double> inner(std::span<const std::int64_t> n_vec, std::span<const std::int64_t> m_vec) const;

 private:
  void check_index(std::span<const std::int64_t> n_vec) const;

  std::vector<std::int64_t> orders_;
  std::int64_t order_ = 1;
};

/// Cell index k = floor(l*x) of x reduced mod 1, clamped to [0, l).
std::int64_t dts_cell(std::int64_t l, double x);

std::complex<double> dts_eval(std::int64_t l, std::int64_t n, double x);

std::complex<double> dts_eval_multi(std::span<const std::int64_t> p_vec, std::span<const std::int64_t> n_vec,
                                    std::span<const double> x_vec);

/// Fourier coefficient c_m(t_n^{(l)}); exactly zero off the progression
/// m = n (mod l).
std::complex<double> dts_fourier_coeff(std::int64_t l, std::int64_t n, std::int64_t m);

/// Same coefficient for a frequency m known to satisfy m = n (mod l); m may
/// exceed the int64 range.
std::complex<double> dts_progression_coeff(std::int64_t l, std::int64_t n, Wide m);

/// c_m(t_n^{(l)}) along the progression m = n (mod l), with the m-independent
/// factors computed once.
class ProgressionCoefficients {
 public:
  ProgressionCoefficients(std::int64_t l, std::int64_t n);

  /// m must satisfy m = n (mod l); not checked.
  std::complex<double> at(Wide m) const;

 private:
  std::int64_t n_;
  long double scale_ = 0;
  std::complex<double> phase_;
};

/// {n + l*j : |j| <= J}.
FrequencySet dts_spectrum(std::int64_t l, std::int64_t n, std::int64_t half_width);

/// Contiguous range of progression steps j kept by a truncation.
struct TruncationWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t size() const { return hi - lo + 1; }
  friend bool operator==(const TruncationWindow&, const TruncationWindow&) = default;
};

/// The `terms` steps j with smallest |j|, j < 0 preferred on ties:
/// 0, -1, 1, -2, 2, ...
TruncationWindow central_window(std::int64_t terms);

/// Squared L2 mass of t_n^{(l)} outside the window, in closed form.
double dts_truncation_error_sq(std::int64_t l, std::int64_t n, const TruncationWindow& window);

/// Truncated approximant keeping the `terms` central spectral terms. Exact
/// zero coefficients are omitted.
TrigPolynomial dts_truncate(std::int64_t l, std::int64_t n, std::int64_t terms);

}  // namespace trigeq
