// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "trigeq/arith.hpp"
#include "trigeq/crt.hpp"
#include "trigeq/dts.hpp"
#include "trigeq/lab.hpp"
#include "trigeq/reduction.hpp"
#include "trigeq/weights.hpp"

using namespace trigeq;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Recorded bound for l * ||t_n - g_n||^2 at budget l; the limit is 4/pi^2.
constexpr double kTruncationConstant = 0.5;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<cd> harmonic(std::int64_t n) {
  std::vector<cd> a;
  for (std::int64_t i = 1; i <= n; ++i) a.emplace_back(1.0 / static_cast<double>(i));
  return a;
}

std::vector<std::int64_t> primes_upto(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

// Tuples of distinct primes <= limit with product <= max_product, sizes 2..max_size.
std::vector<std::vector<std::int64_t>> prime_tuples(std::int64_t limit, std::int64_t max_product, std::size_t max_size) {
  const auto primes = primes_upto(limit);
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur;
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t from, std::int64_t prod) {
    if (cur.size() >= 2) out.push_back(cur);
    if (cur.size() == max_size) return;
    for (std::size_t i = from; i < primes.size(); ++i) {
      if (prod * primes[i] > max_product) break;
      cur.push_back(primes[i]);
      rec(i + 1, prod * primes[i]);
      cur.pop_back();
    }
  };
  rec(0, 1);
  return out;
}

// ---------------------------------------------------------------- 1

Outcome crt_bijectivity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tuples = prime_tuples(31, 1000, 3);
  std::int64_t failures = 0, cells = 0;
  for (const auto& t : tuples) {
    const auto r = check_crt(CoprimeModuli(t), false);
    failures += r.tau_failures + r.tau_bar_failures;
    cells += r.cells;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 5.0, std::to_string(tuples.size()) + " tuples, " + std::to_string(cells) +
                                           " cells, " + std::to_string(failures) + " failures, " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------- 2

Outcome congruence() {
  std::int64_t checks = 0, failures = 0;
  for (const auto& m : std::vector<std::vector<std::int64_t>>{{2, 3}, {3, 5}, {2, 3, 5}, {3, 5, 7}}) {
    const CoprimeModuli moduli(m);
    const auto r = check_crt(moduli, true);
    checks += r.congruence_checks;
    failures += r.congruence_failures;
    // Independent path: the per-function cell check.
    const CellPartition cells(m);
    for (std::int64_t i = 0; i < cells.cell_count(); ++i) {
      try {
        dts_correspondence(moduli, cells.cell_of(i));
      } catch (const ConsistencyError&) {
        ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(checks) + " (n, u) pairs, " + std::to_string(failures) + " failures"};
}

// ---------------------------------------------------------------- 3

Outcome prob_equivalence() {
  std::size_t tried = 0, failed = 0;
  for (const auto& t : prime_tuples(210, 210, 4)) {
    const CoprimeModuli m(t);
    ++tried;
    if (!verify_prob_equiv(full_multi_dts(m), full_reindexed_dts(m))) ++failed;
  }
  return {failed == 0 && tried > 0, std::to_string(tried) + " moduli tuples with p <= 210, " + std::to_string(failed) +
                                        " mismatches"};
}

// ---------------------------------------------------------------- 4

cd adaptive_coefficient(std::int64_t l, std::int64_t n, std::int64_t m) {
  using boost::math::quadrature::gauss_kronrod;
  cd total{};
  for (std::int64_t k = 0; k < l; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(l);
    const double b = static_cast<double>(k + 1) / static_cast<double>(l);
    const double step = 2 * kPi * static_cast<double>(n * k % l) / static_cast<double>(l);
    auto re = [&](double x) { return std::cos(step - 2 * kPi * static_cast<double>(m) * x); };
    auto im = [&](double x) { return std::sin(step - 2 * kPi * static_cast<double>(m) * x); };
    total += cd(gauss_kronrod<double, 31>::integrate(re, a, b, 5, 1e-12),
                gauss_kronrod<double, 31>::integrate(im, a, b, 5, 1e-12));
  }
  return total;
}

Outcome fourier_coefficients() {
  double worst = 0;
  std::int64_t off_nonzero = 0, compared = 0;
  for (std::int64_t l : {2, 3, 4, 8, 16}) {
    for (std::int64_t n = 0; n < l; ++n) {
      for (std::int64_t m = -5 * l; m <= 5 * l; ++m) {
        const cd c = dts_fourier_coeff(l, n, m);
        worst = std::max(worst, std::abs(c - adaptive_coefficient(l, n, m)));
        ++compared;
        if (mod64(m - n, l) != 0 && c != 0.0) ++off_nonzero;
      }
    }
  }
  const double spot = std::abs(dts_fourier_coeff(2, 1, 1) - cd(0, -2 / kPi));
  return {worst <= 1e-10 && off_nonzero == 0 && spot <= 1e-10,
          std::to_string(compared) + " coefficients, max deviation " + fmt("%.2e", worst) + ", off-progression nonzero " +
              std::to_string(off_nonzero) + ", |c1(t1) + 2i/pi| = " + fmt("%.1e", spot)};
}

// ---------------------------------------------------------------- 5

Outcome truncation_bounds() {
  double worst = 0;
  std::int64_t norm_failures = 0;
  for (std::int64_t l = 4; l <= 1024; l *= 2) {
    const auto w = central_window(l);
    for (std::int64_t n = 0; n < l; ++n) {
      worst = std::max(worst, static_cast<double>(l) * dts_truncation_error_sq(l, n, w));
      if (l <= 256) {
        long double sq = 0;
        const auto g = dts_truncate(l, n, l);
        for (const auto& [f, c] : g.terms()) sq += std::norm(c);
        if (sq > 1.0L) ++norm_failures;
      }
    }
  }
  double ratio_lo = 1, ratio_hi = 0;
  for (std::int64_t l : {4, 8, 16}) {
    for (std::int64_t n = 1; n < l; ++n) {
      const ProgressionCoefficients c(l, n);
      auto deficit = [&](std::int64_t J) {
        long double s = 0;
        for (std::int64_t j = -J; j <= J; ++j) s += std::norm(c.at(n + static_cast<Wide>(l) * j));
        return static_cast<double>(1.0L - s);
      };
      for (std::int64_t J : {100, 1000}) {
        const double r = deficit(2 * J) / deficit(J);
        ratio_lo = std::min(ratio_lo, r);
        ratio_hi = std::max(ratio_hi, r);
      }
    }
  }
  const bool ok = worst <= kTruncationConstant && norm_failures == 0 && ratio_lo >= 0.35 && ratio_hi <= 0.65;
  return {ok, "max l*err^2 " + fmt("%.5f", worst) + " <= " + fmt("%.2f", kTruncationConstant) + ", norm > 1: " +
                  std::to_string(norm_failures) + ", deficit ratios in [" + fmt("%.4f", ratio_lo) + ", " +
                  fmt("%.4f", ratio_hi) + "]"};
}

// ---------------------------------------------------------------- 6, 7

const ReductionPlan& big_plan() {
  static const ReductionPlan plan =
      build_reduction(MultiIndexSequence::rc(2, random_multi_indices(2, 4096, 40, 2024)), 4096);
  return plan;
}

Outcome plan_structure() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& plan = big_plan();
  const auto r = check_plan_structure(plan);
  const double secs = seconds_since(t0);
  const std::size_t violations = r.offset_violations + r.growth_violations + r.norm_violations + r.residue_collisions +
                                 r.overlap_violations;
  return {violations == 0 && secs < 60.0,
          "N = 4096, d = 2, seed 2024: " + std::to_string(r.total_terms) + " terms, offsets " +
              std::to_string(r.offset_violations) + ", growth " + std::to_string(r.growth_violations) + ", norms " +
              std::to_string(r.norm_violations) + ", overlaps " + std::to_string(r.overlap_violations + r.residue_collisions) +
              " (" + std::to_string(r.progression_tests) + " progression tests), " + fmt("%.2f s", secs)};
}

Outcome block_error_law() {
  const auto& plan = big_plan();
  const auto input = MultiIndexSequence::rc(2, random_multi_indices(2, 4096, 40, 2024));
  double worst = 0;
  std::size_t law_failures = 0, shift_mismatches = 0;
  for (int k = 0; k <= 8; ++k) {
    const auto& b = plan.block(k);
    const double scaled = std::ldexp(b.eps, k);
    worst = std::max(worst, scaled);
    if (scaled > kBlockErrorConstant) ++law_failures;

    // Unshifted rebuild: identical errors.
    const auto fresh = build_block(input, k, 4096, b.moduli);
    if (fresh.eps != b.eps || fresh.shift != 0) ++shift_mismatches;

    // Shifted terms are the unshifted progression translated by the shift,
    // with the same coefficients, so the truncation error read off the
    // shifted terms equals the unshifted one.
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      const auto& c = b.members[i].components[0];
      const ProgressionCoefficients pc(b.modulus(), c.residue);
      long double mass = 0;
      std::int64_t j = b.window.lo;
      bool exact = true;
      plan.for_each_term(b.members[i].n, [&](std::int64_t, const PlanTerm& t) {
        const Wide raw = c.residue + static_cast<Wide>(b.modulus()) * j;
        exact = exact && t.frequency - b.shift == raw && t.coeff == pc.at(raw);
        mass += std::norm(t.coeff);
        ++j;
      });
      const double trunc = std::sqrt(std::max(0.0, static_cast<double>(1.0L - mass)));
      if (!exact || std::abs(trunc - c.trunc_error) > 1e-7) ++shift_mismatches;
    }
  }
  return {law_failures == 0 && shift_mismatches == 0,
          "max eps_k 2^k = " + fmt("%.4f", worst) + " <= K = " + fmt("%.2f", kBlockErrorConstant) +
              " for k <= 8, shift mismatches " + std::to_string(shift_mismatches)};
}

// ---------------------------------------------------------------- 8

Outcome weight_transfer() {
  const auto plan = build_reduction(MultiIndexSequence::rc(2, random_multi_indices(2, 256, 40, 2024)), 256);
  const auto r = verify_weight_transfer(plan, harmonic(256), WeightSequence::log2());
  return {r.holds && r.c_star <= 17.0, "LHS " + fmt("%.6g", r.lhs) + " <= C* RHS with RHS " + fmt("%.6g", r.rhs) +
                                           ", C* = " + fmt("%.4f", r.c_star) + " at n = " +
                                           std::to_string(r.c_star_argmax) + " (limit 17)"};
}

// ---------------------------------------------------------------- 9

Outcome series_identity() {
  struct Case {
    MultiIndexSequence input;
    std::int64_t n;
  };
  std::vector<Case> cases;
  cases.push_back({MultiIndexSequence::rc(1, random_multi_indices(1, 63, 63, 11)), 63});
  cases.push_back({MultiIndexSequence::rc(2, random_multi_indices(2, 40, 8, 12)), 40});
  cases.push_back({MultiIndexSequence::rc(3, random_multi_indices(3, 31, 4, 13)), 31});
  {
    std::vector<TrigPolynomial> polys;
    for (std::int64_t n = 0; n < 31; ++n) {
      TrigPolynomial p(1);
      p.add(3 * n - 40, 0.6);
      p.add(3 * n - 39, cd(0, 0.8));
      polys.push_back(p);
    }
    cases.push_back({MultiIndexSequence::src(1, polys), 31});
  }
  constexpr std::int64_t G = 1024;
  std::vector<cd> root(G);
  for (std::int64_t t = 0; t < G; ++t) root[static_cast<std::size_t>(t)] = Phase(t, G).value();

  double worst = 0;
  std::int64_t points = 0;
  for (const auto& cs : cases) {
    const auto plan = build_reduction(cs.input, cs.n);
    std::vector<cd> a;
    for (std::int64_t n = 1; n <= cs.n; ++n) a.emplace_back(1.0 / n, 0.3 / (n * n));
    const auto c = map_coefficients(plan, a);
    std::vector<std::int64_t> freq;
    for (std::int64_t s = 1; s <= plan.total_terms(); ++s) freq.push_back(narrow_int64(mod_wide(plan.term(s).frequency, G)));
    std::vector<TrigPolynomial> slots;
    for (std::int64_t n = 1; n <= cs.n; ++n) slots.push_back(plan.slot_polynomial(n));
    for (std::int64_t i = 0; i < G; ++i) {
      const double x = static_cast<double>(i) / G;
      cd flat{}, nested{};
      for (std::size_t s = 0; s < freq.size(); ++s) flat += c[s] * root[static_cast<std::size_t>(freq[s] * i % G)];
      for (std::int64_t n = 1; n <= cs.n; ++n) {
        nested += a[static_cast<std::size_t>(n - 1)] * poly_eval(slots[static_cast<std::size_t>(n - 1)], x);
      }
      worst = std::max(worst, std::abs(flat - nested));
      ++points;
    }
  }
  return {worst <= 1e-12, std::to_string(cases.size()) + " plans (RC d = 1, 2, 3 and SRC), " + std::to_string(points) +
                              " grid points, max |difference| " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 10

Outcome distributional_equality() {
  const auto t0 = std::chrono::steady_clock::now();
  // Exact: multiple DTS against its CRT reindexing on cell-aligned grids.
  double exact_worst = 0;
  {
    std::mt19937_64 rng(10);
    for (const auto& m : std::vector<std::vector<std::int64_t>>{{31, 37}, {5, 7, 11}}) {
      std::vector<Frequency> idx;
      for (int n = 0; n < 31; ++n) {
        Frequency f;
        for (auto p : m) f.push_back(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p)));
        idx.push_back(f);
      }
      const DtsSystem multi(m, idx);
      const auto single = multi.reindexed();
      std::vector<std::int64_t> res;
      for (auto p : m) res.push_back(2 * p);
      const Grid ga(res);
      const Grid gb({single.system().order() * (ga.point_count() / single.system().order())});
      for (int k = 0; k <= 4; ++k) {
        exact_worst = std::max(exact_worst, distribution_compare(multi, harmonic(31), single, harmonic(31), k, ga, gb).ks);
      }
    }
  }

  // Truncated: the d = 2 trigonometric system against the reduced plan.
  const std::int64_t grid = 512;
  const auto idx = random_multi_indices(2, 31, 40, 2024);
  const auto plan = build_reduction(MultiIndexSequence::rc(2, idx), 31);
  const TrigSystem trig(2, idx);
  const PlanSystem reduced(plan);
  const auto a = harmonic(31);
  std::string detail;
  bool truncated_ok = true;
  for (int k = 0; k <= 4; ++k) {
    const double ks = distribution_compare(trig, a, reduced, a, k, Grid::cube(2, grid), Grid::cube(1, grid * grid)).ks;
    const double bound = plan.block(k).eps + 2.0 / grid;
    truncated_ok = truncated_ok && ks <= bound;
    detail += " k" + std::to_string(k) + ":" + fmt("%.4f", ks) + "/" + fmt("%.4f", bound);
  }
  const double secs = seconds_since(t0);
  return {exact_worst == 0.0 && truncated_ok && secs < 120.0,
          "exact KS " + fmt("%.1g", exact_worst) + "; truncated KS/bound" + detail + "; " + fmt("%.1f s", secs)};
}

// ---------------------------------------------------------------- 11

double naive_gap(const SystemEvaluator& sys, const std::vector<cd>& a, int k, const Grid& grid) {
  const auto fast = block_maximum(sys, a, k, grid);
  const std::int64_t first = std::int64_t{1} << k;
  std::vector<std::vector<cd>> f;
  for (std::int64_t n = first; n < 2 * first; ++n) f.push_back(sys.sample(n, grid).values);
  double worst = 0;
  for (std::size_t p = 0; p < fast.values.size(); ++p) {
    double best = 0;
    for (std::int64_t m = first; m < 2 * first; ++m) {
      cd s{};
      for (std::int64_t n = first; n <= m; ++n) s += a[static_cast<std::size_t>(n - 1)] * f[static_cast<std::size_t>(n - first)][p];
      best = std::max(best, std::abs(s));
    }
    worst = std::max(worst, std::abs(best - fast.values[p]));
  }
  return worst;
}

Outcome block_maxima_oracle() {
  const std::vector<cd> a = harmonic(127);
  std::vector<cd> b(127);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = cd(std::cos(1.7 * i), std::sin(0.3 * i)) / std::sqrt(i + 1.0);

  std::vector<Frequency> line;
  for (std::int64_t n = 1; n <= 127; ++n) line.push_back({(n * 37) % 255 - 127});
  const TrigSystem t1(1, line);
  const auto idx2 = random_multi_indices(2, 127, 8, 3);
  const TrigSystem t2(2, idx2);
  std::vector<Frequency> didx;
  for (std::int64_t n = 0; n < 127; ++n) didx.push_back({n % 7, (3 * n) % 11});
  const DtsSystem dts({7, 11}, didx);
  const auto plan = build_reduction(MultiIndexSequence::rc(1, random_multi_indices(1, 127, 100, 4)), 127);
  const PlanSystem ps(plan);

  double worst = 0;
  std::size_t runs = 0;
  for (int k = 0; k <= 6; ++k) {
    for (const std::vector<cd>* coeffs : std::array<const std::vector<cd>*, 2>{&a, &b}) {
      worst = std::max(worst, naive_gap(t1, *coeffs, k, Grid::cube(1, 1024)));
      worst = std::max(worst, naive_gap(t2, *coeffs, k, Grid::cube(2, 32)));
      worst = std::max(worst, naive_gap(dts, *coeffs, k, Grid({14, 22})));
      worst = std::max(worst, naive_gap(ps, *coeffs, k, Grid::cube(1, 1021)));
      runs += 4;
    }
  }
  return {worst <= 1e-12, std::to_string(runs) + " (system, coefficients, k) runs, k <= 6, max |difference| " +
                              fmt("%.2e", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"CRT bijectivity", crt_bijectivity},
      {"CRT congruence", congruence},
      {"Probabilistic equivalence", prob_equivalence},
      {"Fourier coefficients", fourier_coefficients},
      {"Truncation bounds", truncation_bounds},
      {"Plan structure", plan_structure},
      {"Block error law", block_error_law},
      {"Weight transfer", weight_transfer},
      {"Series reorganization", series_identity},
      {"Distributional equality", distributional_equality},
      {"Block-maxima oracle", block_maxima_oracle},
  };
  int failed = 0;
  int id = 0;
  for (const auto& c : criteria) {
    ++id;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, c.name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", id - failed, id);
  return failed == 0 ? 0 : 1;
}
