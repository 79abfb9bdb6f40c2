#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace trigeq {

/// Integer frequency vector; length equals the dimension.
using Frequency = std::vector<std::int64_t>;

/// Finite set of integer frequencies (or frequency vectors) of one dimension.
class FrequencySet {
 public:
  explicit FrequencySet(std::size_t dim = 1) : dim_(dim) {}
  FrequencySet(std::size_t dim, std::vector<Frequency> freqs);

  /// One-dimensional set from scalar frequencies.
  static FrequencySet scalar(std::vector<std::int64_t> freqs);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return freqs_.size(); }
  bool empty() const { return freqs_.empty(); }
  bool contains(const Frequency& f) const;

  /// Sorted, duplicate-free members.
  const std::vector<Frequency>& members() const { return freqs_; }

  bool disjoint_from(const FrequencySet& other) const;

 private:
  std::size_t dim_;
  std::vector<Frequency> freqs_;
};

/// Finite trigonometric polynomial on the d-torus, a map from distinct
/// frequency vectors to complex coefficients.
class TrigPolynomial {
 public:
  using Terms = std::map<Frequency, std::complex<double>>;

  explicit TrigPolynomial(std::size_t dim = 1);

  static TrigPolynomial monomial(Frequency freq, std::complex<double> coeff = 1.0);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }

  /// Adds coeff to the coefficient at freq (creating the term if needed).
  void add(const Frequency& freq, std::complex<double> coeff);
  void add(std::int64_t freq, std::complex<double> coeff) { add(Frequency{freq}, coeff); }

  /// Coefficient at freq, zero if absent.
  std::complex<double> coefficient(const Frequency& freq) const;

  /// Frequencies carrying a nonzero coefficient.
  FrequencySet spectrum() const;

  /// Multiplies by exp(2*pi*i*<shift, x>).
  TrigPolynomial modulated(const Frequency& shift) const;

  TrigPolynomial scaled(std::complex<double> factor) const;

  friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

 private:
  void check_freq(const Frequency& freq) const;

  std::size_t dim_;
  Terms terms_;
};

std::complex<double> poly_eval(const TrigPolynomial& f, std::span<const double> x);
std::complex<double> poly_eval(const TrigPolynomial& f, double x);

double poly_l2_norm(const TrigPolynomial& f);

/// <f, g> = sum over shared frequencies of c_f * conj(c_g).
std::complex<double> poly_inner(const TrigPolynomial& f, const TrigPolynomial& g);

/// Parseval distance ||f - g||.
double poly_distance(const TrigPolynomial& f, const TrigPolynomial& g);

TrigPolynomial operator+(const TrigPolynomial& f, const TrigPolynomial& g);

}  // namespace trigeq
