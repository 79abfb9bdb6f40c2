#include "trigeq/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trigeq/phase.hpp"

namespace trigeq {

FrequencySet::FrequencySet(std::size_t dim, std::vector<Frequency> freqs) : dim_(dim), freqs_(std::move(freqs)) {
  for (const auto& f : freqs_) {
    if (f.size() != dim_) throw std::domain_error("FrequencySet: frequency of wrong dimension");
  }
  std::sort(freqs_.begin(), freqs_.end());
  freqs_.erase(std::unique(freqs_.begin(), freqs_.end()), freqs_.end());
}

FrequencySet FrequencySet::scalar(std::vector<std::int64_t> freqs) {
  std::vector<Frequency> out;
  out.reserve(freqs.size());
  for (auto f : freqs) out.push_back(Frequency{f});
  return {1, std::move(out)};
}

bool FrequencySet::contains(const Frequency& f) const { return std::binary_search(freqs_.begin(), freqs_.end(), f); }

bool FrequencySet::disjoint_from(const FrequencySet& other) const {
  if (dim_ != other.dim_) throw std::domain_error("FrequencySet: dimension mismatch");
  auto a = freqs_.begin();
  auto b = other.freqs_.begin();
  while (a != freqs_.end() && b != other.freqs_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return false;
    }
  }
  return true;
}

TrigPolynomial::TrigPolynomial(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::domain_error("TrigPolynomial: dimension must be at least 1");
}

TrigPolynomial TrigPolynomial::monomial(Frequency freq, std::complex<double> coeff) {
  TrigPolynomial p(freq.size());
  p.add(freq, coeff);
  return p;
}

void TrigPolynomial::check_freq(const Frequency& freq) const {
  if (freq.size() != dim_) {
    throw std::domain_error("TrigPolynomial: frequency has dimension " + std::to_string(freq.size()) + ", expected " +
                            std::to_string(dim_));
  }
}

void TrigPolynomial::add(const Frequency& freq, std::complex<double> coeff) {
  check_freq(freq);
  terms_[freq] += coeff;
}

std::complex<double> TrigPolynomial::coefficient(const Frequency& freq) const {
  check_freq(freq);
  auto it = terms_.find(freq);
  return it == terms_.end() ? std::complex<double>{} : it->second;
}

FrequencySet TrigPolynomial::spectrum() const {
  std::vector<Frequency> out;
  for (const auto& [f, c] : terms_) {
    if (c != 0.0) out.push_back(f);
  }
  return {dim_, std::move(out)};
}

TrigPolynomial TrigPolynomial::modulated(const Frequency& shift) const {
  check_freq(shift);
  TrigPolynomial out(dim_);
  for (const auto& [f, c] : terms_) {
    Frequency g = f;
    for (std::size_t j = 0; j < dim_; ++j) g[j] += shift[j];
    out.terms_.emplace(std::move(g), c);
  }
  return out;
}

TrigPolynomial TrigPolynomial::scaled(std::complex<double> factor) const {
  TrigPolynomial out(*this);
  for (auto& [f, c] : out.terms_) c *= factor;
  return out;
}

std::complex<double> poly_eval(const TrigPolynomial& f, std::span<const double> x) {
  if (x.size() != f.dim()) throw std::domain_error("poly_eval: point dimension mismatch");
  std::complex<double> sum{};
  for (const auto& [freq, c] : f.terms()) {
    long double turns = 0.0L;
    for (std::size_t j = 0; j < x.size(); ++j) {
      long double part = static_cast<long double>(freq[j]) * static_cast<long double>(x[j]);
      turns += part - std::floor(part);
    }
    sum += c * unit_turn(turns);
  }
  return sum;
}

std::complex<double> poly_eval(const TrigPolynomial& f, double x) { return poly_eval(f, std::span<const double>(&x, 1)); }

double poly_l2_norm(const TrigPolynomial& f) {
  double s = 0.0;
  for (const auto& [freq, c] : f.terms()) s += std::norm(c);
  return std::sqrt(s);
}

std::complex<double> poly_inner(const TrigPolynomial& f, const TrigPolynomial& g) {
  if (f.dim() != g.dim()) throw std::domain_error("poly_inner: dimension mismatch");
  std::complex<double> s{};
  auto a = f.terms().begin();
  auto b = g.terms().begin();
  while (a != f.terms().end() && b != g.terms().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * std::conj(b->second);
      ++a;
      ++b;
    }
  }
  return s;
}

TrigPolynomial operator+(const TrigPolynomial& f, const TrigPolynomial& g) {
  if (f.dim() != g.dim()) throw std::domain_error("TrigPolynomial: dimension mismatch");
  TrigPolynomial out(f);
  for (const auto& [freq, c] : g.terms()) out.add(freq, c);
  return out;
}

double poly_distance(const TrigPolynomial& f, const TrigPolynomial& g) {
  if (f.dim() != g.dim()) throw std::domain_error("poly_distance: dimension mismatch");
  return poly_l2_norm(f + g.scaled(-1.0));
}

}  // namespace trigeq
