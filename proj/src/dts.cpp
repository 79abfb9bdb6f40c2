#include "trigeq/dts.hpp"

#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trigeq {

namespace {

void check_order(std::int64_t l) {
  if (l < 1) throw std::domain_error("DTS order must be positive, got " + std::to_string(l));
}

void check_dts_index(std::int64_t l, std::int64_t n) {
  check_order(l);
  if (n < 0 || n >= l) {
    throw std::domain_error("DTS index " + std::to_string(n) + " outside [0, " + std::to_string(l) + ")");
  }
}

}  // namespace

DiscreteTrigSystem::DiscreteTrigSystem(std::vector<std::int64_t> axis_orders) : orders_(std::move(axis_orders)) {
  if (orders_.empty()) throw std::domain_error("DiscreteTrigSystem: at least one axis required");
  for (auto p : orders_) {
    if (p < 2) throw std::domain_error("DiscreteTrigSystem: axis orders must be >= 2");
    order_ = checked_mul(order_, p);
  }
}

void DiscreteTrigSystem::check_index(std::span<const std::int64_t> n_vec) const {
  if (n_vec.size() != orders_.size()) throw std::domain_error("DiscreteTrigSystem: index dimension mismatch");
  for (std::size_t j = 0; j < n_vec.size(); ++j) check_dts_index(orders_[j], n_vec[j]);
}

Phase DiscreteTrigSystem::phase_at_cell(std::span<const std::int64_t> n_vec, std::span<const std::int64_t> cell) const {
  check_index(n_vec);
  if (cell.size() != orders_.size()) throw std::domain_error("DiscreteTrigSystem: cell dimension mismatch");
  // sum_j n_j u_j / p_j = (sum_j n_j u_j (p / p_j)) / p  (mod 1)
  Wide num = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    if (cell[j] < 0 || cell[j] >= orders_[j]) throw std::domain_error("DiscreteTrigSystem: cell index out of range");
    num += static_cast<Wide>(mul_mod(n_vec[j], cell[j], orders_[j])) * (order_ / orders_[j]);
  }
  return {static_cast<std::int64_t>(mod_wide(num, order_)), order_};
}

std::complex<double> DiscreteTrigSystem::value(std::span<const std::int64_t> n_vec, std::span<const double> x) const {
  if (x.size() != orders_.size()) throw std::domain_error("DiscreteTrigSystem: point dimension mismatch");
  std::vector<std::int64_t> cell(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) cell[j] = dts_cell(orders_[j], x[j]);
  return phase_at_cell(n_vec, cell).value();
}

std::complex<double> DiscreteTrigSystem::inner(std::span<const std::int64_t> n_vec,
                                               std::span<const std::int64_t> m_vec) const {
  check_index(n_vec);
  check_index(m_vec);
  // Product over axes of (1/p_j) sum_k exp(2 pi i (n_j - m_j) k / p_j).
  std::complex<double> out = 1.0;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    std::complex<double> s{};
    for (std::int64_t k = 0; k < orders_[j]; ++k) s += Phase((n_vec[j] - m_vec[j]) * k, orders_[j]).value();
    out *= s / static_cast<double>(orders_[j]);
  }
  return out;
}

std::int64_t dts_cell(std::int64_t l, double x) {
  check_order(l);
  long double t = static_cast<long double>(x);
  t -= std::floor(t);
  auto k = static_cast<std::int64_t>(std::floor(t * static_cast<long double>(l)));
  if (k >= l) k = l - 1;
  if (k < 0) k = 0;
  return k;
}

std::complex<double> dts_eval(std::int64_t l, std::int64_t n, double x) {
  check_dts_index(l, n);
  return Phase(mul_mod(n, dts_cell(l, x), l), l).value();
}

std::complex<double> dts_eval_multi(std::span<const std::int64_t> p_vec, std::span<const std::int64_t> n_vec,
                                    std::span<const double> x_vec) {
  if (p_vec.size() != n_vec.size() || p_vec.size() != x_vec.size()) {
    throw std::domain_error("dts_eval_multi: dimension mismatch");
  }
  std::complex<double> out = 1.0;
  for (std::size_t j = 0; j < p_vec.size(); ++j) out *= dts_eval(p_vec[j], n_vec[j], x_vec[j]);
  return out;
}

ProgressionCoefficients::ProgressionCoefficients(std::int64_t l, std::int64_t n) : n_(n) {
  check_dts_index(l, n);
  // l * (1 - e(-n/l)) / (2 pi i m) = (l / (pi m)) sin(pi n / l) e(-n / 2l)
  const long double pi = std::numbers::pi_v<long double>;
  // sin(pi n / l) = sin(pi (l - n) / l); the smaller argument keeps full
  // relative precision when n is close to l.
  const std::int64_t r = std::min(n, l - n);
  scale_ = static_cast<long double>(l) * std::sin(pi * static_cast<long double>(r) / static_cast<long double>(l)) / pi;
  phase_ = Phase(-n, 2 * l).value();
}

std::complex<double> ProgressionCoefficients::at(Wide m) const {
  if (m == 0) return n_ == 0 ? 1.0 : 0.0;
  if (n_ == 0) return 0.0;
  return static_cast<double>(scale_ / static_cast<long double>(m)) * phase_;
}

std::complex<double> dts_progression_coeff(std::int64_t l, std::int64_t n, Wide m) {
  return ProgressionCoefficients(l, n).at(m);
}

std::complex<double> dts_fourier_coeff(std::int64_t l, std::int64_t n, std::int64_t m) {
  check_dts_index(l, n);
  if (mod64(m - n, l) != 0) return 0.0;
  return dts_progression_coeff(l, n, m);
}

FrequencySet dts_spectrum(std::int64_t l, std::int64_t n, std::int64_t half_width) {
  check_dts_index(l, n);
  if (half_width < 0) throw std::domain_error("dts_spectrum: half-width must be nonnegative");
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(2 * half_width + 1));
  for (std::int64_t j = -half_width; j <= half_width; ++j) out.push_back(checked_add(n, checked_mul(l, j)));
  return FrequencySet::scalar(std::move(out));
}

TruncationWindow central_window(std::int64_t terms) {
  if (terms < 1) throw std::domain_error("truncation budget must be at least 1");
  return {-(terms / 2), (terms + 1) / 2 - 1};
}

double dts_truncation_error_sq(std::int64_t l, std::int64_t n, const TruncationWindow& window) {
  check_dts_index(l, n);
  if (window.lo > 0 || window.hi < 0) throw std::domain_error("truncation window must contain j = 0");
  if (n == 0) return 0.0;
  // |c_{n+lj}|^2 = sin^2(pi theta) / (pi^2 (j + theta)^2), theta = n / l; the
  // two tails are trigamma values.
  const double theta = static_cast<double>(n) / static_cast<double>(l);
  const double theta_c = static_cast<double>(l - n) / static_cast<double>(l);
  const double s = std::sin(std::numbers::pi * std::min(theta, theta_c)) / std::numbers::pi;
  const double upper = boost::math::trigamma(static_cast<double>(window.hi) + 1.0 + theta);
  const double lower = boost::math::trigamma(static_cast<double>(-window.lo) + theta_c);
  return s * s * (upper + lower);
}

TrigPolynomial dts_truncate(std::int64_t l, std::int64_t n, std::int64_t terms) {
  check_dts_index(l, n);
  const TruncationWindow w = central_window(terms);
  TrigPolynomial out(1);
  for (std::int64_t j = w.lo; j <= w.hi; ++j) {
    const std::int64_t m = checked_add(n, checked_mul(l, j));
    const std::complex<double> c = dts_progression_coeff(l, n, m);
    if (c != 0.0) out.add(m, c);
  }
  return out;
}

}  // namespace trigeq
