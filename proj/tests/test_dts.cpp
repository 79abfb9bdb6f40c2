#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "trigeq/dts.hpp"

using namespace trigeq;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: integrate t_n^{(l)}(x) exp(-2 pi i m x) cell by cell with
// a 61-point Gauss-Kronrod rule on the real and imaginary parts.
cd quadrature_coeff(std::int64_t l, std::int64_t n, std::int64_t m) {
  using boost::math::quadrature::gauss_kronrod;
  cd total{};
  for (std::int64_t k = 0; k < l; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(l);
    const double b = static_cast<double>(k + 1) / static_cast<double>(l);
    const double phase = 2 * kPi * static_cast<double>(n * k) / static_cast<double>(l);
    auto re = [&](double x) { return std::cos(phase - 2 * kPi * static_cast<double>(m) * x); };
    auto im = [&](double x) { return std::sin(phase - 2 * kPi * static_cast<double>(m) * x); };
    total += cd(gauss_kronrod<double, 61>::integrate(re, a, b, 0),
                gauss_kronrod<double, 61>::integrate(im, a, b, 0));
  }
  return total;
}

bool close(cd a, cd b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("dts_eval examples") {
  CHECK(dts_eval(5, 0, 0.42) == cd(1.0, 0.0));
  CHECK(dts_eval(2, 1, 0.7) == cd(-1.0, 0.0));
  CHECK(dts_eval(4, 3, 0.3) == cd(0.0, -1.0));
  // Half-open cells and periodic reduction.
  CHECK(dts_eval(4, 1, 0.25) == cd(0.0, 1.0));
  CHECK(dts_eval(4, 1, 1.25) == cd(0.0, 1.0));
  CHECK(dts_eval(4, 1, -0.75) == cd(0.0, 1.0));
  CHECK_THROWS_AS(dts_eval(4, 4, 0.1), std::domain_error);
  CHECK_THROWS_AS(dts_eval(4, -1, 0.1), std::domain_error);
}

TEST_CASE("dts_eval_multi examples") {
  const std::int64_t p[] = {2, 3};
  {
    const std::int64_t n[] = {0, 0};
    const double x[] = {0.1, 0.9};
    CHECK(dts_eval_multi(p, n, x) == cd(1.0, 0.0));
  }
  {
    // Cells (1, 2): 1/2 + 2/3 = 1/6 (mod 1).
    const std::int64_t n[] = {1, 1};
    const double x[] = {0.6, 0.7};
    CHECK(close(dts_eval_multi(p, n, x), std::polar(1.0, 2 * kPi / 6), 1e-15));
    const std::int64_t cell[] = {1, 2};
    CHECK(DiscreteTrigSystem({2, 3}).phase_at_cell(n, cell) == Phase(1, 6));
  }
  {
    const std::int64_t q[] = {3, 5};
    const std::int64_t n[] = {2, 3};
    const double x[] = {0.0, 0.0};
    CHECK(dts_eval_multi(q, n, x) == cd(1.0, 0.0));
  }
  const std::int64_t n3[] = {0, 0, 0};
  const double x2[] = {0.1, 0.2};
  CHECK_THROWS_AS(dts_eval_multi(p, n3, x2), std::domain_error);
}

TEST_CASE("DTS is orthonormal for every order up to 64") {
  for (std::int64_t l = 2; l <= 64; ++l) {
    const auto sys = DiscreteTrigSystem::of_order(l);
    for (std::int64_t n = 0; n < l; ++n) {
      for (std::int64_t m = 0; m < l; ++m) {
        const std::int64_t a[] = {n};
        const std::int64_t b[] = {m};
        const cd ip = sys.inner(a, b);
        CHECK(std::abs(ip - (n == m ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("Fourier coefficient examples") {
  for (std::int64_t l : {1, 2, 7, 16}) CHECK(dts_fourier_coeff(l, 0, 0) == cd(1.0, 0.0));
  CHECK(dts_fourier_coeff(8, 3, 5) == cd(0.0, 0.0));
  CHECK(close(dts_fourier_coeff(2, 1, 1), cd(0.0, -2.0 / kPi), 1e-15));
  // Oracle value for the same coefficient.
  CHECK(close(quadrature_coeff(2, 1, 1), cd(0.0, -0.636619772367581), 1e-12));
  CHECK(dts_fourier_coeff(5, 2, 0) == cd(0.0, 0.0));
}

TEST_CASE("Fourier coefficients match quadrature and vanish off the progression") {
  for (std::int64_t l : {2, 3, 4, 8, 16}) {
    for (std::int64_t n = 0; n < l; ++n) {
      for (std::int64_t m = -5 * l; m <= 5 * l; ++m) {
        const cd c = dts_fourier_coeff(l, n, m);
        if (mod64(m - n, l) != 0) {
          CHECK(c == cd(0.0, 0.0));
        }
        CHECK(close(c, quadrature_coeff(l, n, m), 1e-10));
      }
    }
  }
}

TEST_CASE("coefficient decay (|j|+1)|c_{n+lj}| stays bounded") {
  double worst = 0.0;
  for (std::int64_t l : {2, 3, 5, 8, 64, 1000}) {
    for (std::int64_t n = 0; n < l; n += std::max<std::int64_t>(1, l / 16)) {
      for (std::int64_t j = -10000; j <= 10000; j += (std::llabs(j) < 20 ? 1 : 7)) {
        worst = std::max(worst, static_cast<double>(std::llabs(j) + 1) * std::abs(dts_fourier_coeff(l, n, n + l * j)));
      }
    }
  }
  // (|j|+1) sin(pi theta) / (pi |j + theta|) peaks at j = -1, theta -> 1,
  // where it tends to 2.
  MESSAGE("measured decay constant " << worst);
  CHECK(worst <= 2.0);
}

TEST_CASE("dts_spectrum") {
  CHECK(dts_spectrum(3, 1, 1).members() == FrequencySet::scalar({-2, 1, 4}).members());
  CHECK(dts_spectrum(2, 0, 2).members() == FrequencySet::scalar({-4, -2, 0, 2, 4}).members());
  CHECK(dts_spectrum(6, 2, 50).disjoint_from(dts_spectrum(6, 5, 50)));
  CHECK_FALSE(dts_spectrum(6, 2, 50).disjoint_from(dts_spectrum(6, 2, 1)));
  CHECK_THROWS_AS(dts_spectrum(6, 2, -1), std::domain_error);
}

TEST_CASE("central truncation window order") {
  CHECK(central_window(1) == TruncationWindow{0, 0});
  CHECK(central_window(2) == TruncationWindow{-1, 0});
  CHECK(central_window(3) == TruncationWindow{-1, 1});
  CHECK(central_window(4) == TruncationWindow{-2, 1});
  CHECK(central_window(16).size() == 16);
  CHECK_THROWS_AS(central_window(0), std::domain_error);
}

TEST_CASE("dts_truncate examples") {
  const auto g = dts_truncate(2, 1, 1);
  REQUIRE(g.size() == 1);
  CHECK(close(g.coefficient({1}), cd(0.0, -2.0 / kPi), 1e-15));
  CHECK(dts_truncation_error_sq(2, 1, central_window(1)) == doctest::Approx(1.0 - 4.0 / (kPi * kPi)).epsilon(1e-13));
  CHECK(dts_truncation_error_sq(2, 1, central_window(1)) == doctest::Approx(0.594715).epsilon(1e-6));

  const auto h = dts_truncate(4, 0, 1);
  REQUIRE(h.size() == 1);
  CHECK(h.coefficient({0}) == cd(1.0, 0.0));
  CHECK(dts_truncation_error_sq(4, 0, central_window(1)) == 0.0);
}

TEST_CASE("closed-form truncation error equals the Parseval complement") {
  for (std::int64_t l : {2, 3, 7, 16, 100}) {
    for (std::int64_t n = 0; n < l; ++n) {
      double previous = 2.0;
      for (std::int64_t t : {1, 2, 3, 4, 9, 16, 64, 257}) {
        const auto g = dts_truncate(l, n, t);
        const double norm = poly_l2_norm(g);
        CHECK(norm <= 1.0 + 1e-15);
        const double parseval = 1.0 - norm * norm;
        const double closed = dts_truncation_error_sq(l, n, central_window(t));
        CHECK(std::abs(parseval - closed) < 1e-12);
        CHECK(closed <= previous + 1e-15);
        previous = closed;
      }
    }
  }
}

TEST_CASE("Parseval deficit halves when the window doubles") {
  for (std::int64_t l : {2, 3, 5, 16}) {
    for (std::int64_t n = 1; n < l; ++n) {
      for (std::int64_t half : {100, 1000}) {
        auto deficit = [&](std::int64_t h) {
          double kept = 0.0;
          for (std::int64_t j = -h; j <= h; ++j) kept += std::norm(dts_fourier_coeff(l, n, n + l * j));
          return 1.0 - kept;
        };
        const double ratio = deficit(2 * half) / deficit(half);
        CHECK(ratio >= 0.35);
        CHECK(ratio <= 0.65);
      }
    }
  }
}

TEST_CASE("coefficients keep relative precision for n close to l") {
  const std::int64_t l = 258855917;
  for (std::int64_t d : {1, 9, 1000}) {
    const std::int64_t n = l - d;
    const long double pi = std::numbers::pi_v<long double>;
    const long double want = static_cast<long double>(l) * std::sin(pi * d / l) / (pi * n);
    const double got = std::abs(dts_progression_coeff(l, n, n));
    CHECK(std::abs(got - static_cast<double>(want)) <= 1e-15 * static_cast<double>(want));
    long double mass = 0;
    const auto w = central_window(4096);
    for (std::int64_t j = w.lo; j <= w.hi; ++j) mass += std::norm(dts_progression_coeff(l, n, n + l * j));
    CHECK(mass <= 1.0L);
    CHECK(static_cast<double>(1.0L - mass) == doctest::Approx(dts_truncation_error_sq(l, n, w)).epsilon(1e-6));
  }
}
