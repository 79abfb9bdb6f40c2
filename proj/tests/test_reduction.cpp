#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "trigeq/reduction.hpp"

using namespace trigeq;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

bool trial_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// <e(nu x), t_{nu mod p}> on one axis by quadrature, cell by cell.
cd axis_inner_by_quadrature(std::int64_t p, std::int64_t nu) {
  using boost::math::quadrature::gauss_kronrod;
  cd total{};
  for (std::int64_t k = 0; k < p; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(p);
    const double b = static_cast<double>(k + 1) / static_cast<double>(p);
    const double step = 2 * kPi * static_cast<double>(nu) * static_cast<double>(k) / static_cast<double>(p);
    auto re = [&](double x) { return std::cos(2 * kPi * static_cast<double>(nu) * x - step); };
    auto im = [&](double x) { return std::sin(2 * kPi * static_cast<double>(nu) * x - step); };
    total += cd(gauss_kronrod<double, 61>::integrate(re, a, b, 0), gauss_kronrod<double, 61>::integrate(im, a, b, 0));
  }
  return total;
}

std::vector<Frequency> scalars(std::initializer_list<std::int64_t> xs) {
  std::vector<Frequency> out;
  for (auto x : xs) out.push_back({x});
  return out;
}

}  // namespace

TEST_CASE("progression intersection agrees with enumeration") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> base(-40, 40), step(1, 12), len(-6, 6);
  for (int t = 0; t < 4000; ++t) {
    Progression u{base(rng), step(rng), len(rng), len(rng)};
    Progression v{base(rng), step(rng), len(rng), len(rng)};
    std::set<Wide> su;
    for (Wide j = u.lo; j <= u.hi; ++j) su.insert(u.base + u.step * j);
    bool brute = false;
    for (Wide j = v.lo; j <= v.hi; ++j) brute = brute || su.count(v.base + v.step * j);
    CHECK(progressions_meet(u, v) == brute);
  }
  // Wide values far outside int64.
  const Wide big = static_cast<Wide>(1) << 90;
  CHECK(progressions_meet({big + 3, 1000003, -5, 5}, {big + 3 + 1000003 * 4, 999983, -2, 2}));
  CHECK_FALSE(progressions_meet({big, 6, 0, 100}, {big + 3, 4, 0, 100}));
}

TEST_CASE("choose_block_moduli examples") {
  CHECK(choose_block_moduli(scalars({0}), 0.01).moduli() == std::vector<std::int64_t>{2});
  CHECK(choose_block_moduli(scalars({1}), 0.1).moduli() == std::vector<std::int64_t>{67});
  // Trial-division scan for the d = 1 case.
  std::int64_t p = 2;
  while (!(trial_prime(p) && 2 * kPi / static_cast<double>(p) <= 0.1)) ++p;
  CHECK(p == 67);

  const std::vector<Frequency> one{{1, 2}};
  const auto m = choose_block_moduli(one, 0.2);
  CHECK(m.moduli() == std::vector<std::int64_t>{67, 127});
  CHECK(2 * kPi / 67 + 4 * kPi / 127 <= 0.2);

  CHECK_THROWS_AS(choose_block_moduli(scalars({1}), 0.0), std::domain_error);
  CHECK_THROWS_AS(choose_block_moduli(scalars({1}), -1.0), std::domain_error);
  CHECK_THROWS_AS(choose_block_moduli(std::vector<Frequency>{}, 0.1), std::domain_error);
}

TEST_CASE("chosen moduli are distinct primes meeting the sup bound") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng() % 3;
    const auto block = random_multi_indices(d, 1 + rng() % 6, 3 + static_cast<std::int64_t>(rng() % 30), rng());
    const double eps = std::ldexp(1.0, -static_cast<int>(rng() % 8) - 1);
    const auto m = choose_block_moduli(block, eps);
    std::set<std::int64_t> distinct(m.moduli().begin(), m.moduli().end());
    CHECK(distinct.size() == d);
    double bound = 0;
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(trial_prime(m[j]));
      std::int64_t extent = 0;
      for (const auto& f : block) extent = std::max(extent, std::abs(f[j]));
      CHECK(m[j] > extent);
      bound += 2 * kPi * static_cast<double>(extent) / static_cast<double>(m[j]);
    }
    CHECK(bound <= eps);
  }
}

TEST_CASE("discretization error matches quadrature") {
  for (std::int64_t p : {3, 7, 13, 67}) {
    for (std::int64_t nu = -(p - 1); nu < p; nu += std::max<std::int64_t>(1, p / 7)) {
      const cd ip = axis_inner_by_quadrature(p, nu);
      const double oracle = std::sqrt(std::max(0.0, 2 - 2 * ip.real()));
      CHECK(std::abs(discretization_error(CoprimeModuli({p}), {nu}) - oracle) < 1e-9);
    }
  }
  // Product structure in two dimensions.
  const CoprimeModuli m({11, 13});
  const cd ip = axis_inner_by_quadrature(11, 4) * axis_inner_by_quadrature(13, -9);
  CHECK(std::abs(discretization_error(m, {4, -9}) - std::sqrt(2 - 2 * ip.real())) < 1e-9);
  CHECK(discretization_error(m, {0, 0}) == 0.0);
  // Tiny frequencies: no cancellation; the error is 2 pi nu / (p sqrt 3) to
  // leading order.
  const double tiny = discretization_error(CoprimeModuli({1000003}), {1});
  CHECK(tiny == doctest::Approx(2 * kPi / (1000003 * std::sqrt(3.0))).epsilon(1e-6));
  CHECK_THROWS_AS(discretization_error(CoprimeModuli({5}), {5}), PreconditionError);
}

TEST_CASE("build_block examples") {
  {
    const auto input = MultiIndexSequence::rc(1, scalars({0}));
    const auto b = build_block(input, 0, 1);
    const auto polys = build_block_polys(b);
    REQUIRE(polys.size() == 1);
    CHECK(polys[0] == TrigPolynomial::monomial({0}));
    CHECK(b.moduli.moduli() == std::vector<std::int64_t>{2});
    CHECK(b.eps == 0.0);
  }
  {
    const auto input = MultiIndexSequence::rc(1, scalars({1}));
    const auto b = build_block(input, 0, 1, CoprimeModuli({67}));
    const auto poly = member_polynomial(b, 0);
    REQUIRE(poly.size() == 1);
    const cd c = poly.coefficient({1});
    CHECK(std::abs(c) == doctest::Approx(67 * std::sin(kPi / 67) / kPi).epsilon(1e-14));
    CHECK(std::abs(c) == doctest::Approx(0.99963).epsilon(1e-5));
    CHECK(b.eps <= 0.5);
    CHECK(b.eps_trunc == doctest::Approx(std::sqrt(1 - std::norm(c))).epsilon(1e-9));
    CHECK(b.eps_trunc == doctest::Approx(0.0271).epsilon(2e-3));
    CHECK_THROWS_AS(build_block(input, 0, 1, CoprimeModuli({7})), PreconditionError);
  }
  {
    const auto input = MultiIndexSequence::rc(2, {{0, 1}, {3, -2}, {-1, 4}});
    const auto b = build_block(input, 1, 3);
    REQUIRE(b.members.size() == 2);
    for (const auto& poly : build_block_polys(b)) CHECK(poly.size() <= 4);
    CHECK(b.window.size() == 4);
    CHECK(b.eps <= kBlockErrorConstant / 2);
    CHECK(b.eps_disc <= 0.25);
  }
}

TEST_CASE("member polynomials equal truncated reindexed DTS functions") {
  const auto input = MultiIndexSequence::rc(2, random_multi_indices(2, 15, 6, 21));
  for (int k = 0; k < 4; ++k) {
    const auto b = build_block(input, k, 15);
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      const auto& c = b.members[i].components[0];
      std::vector<std::int64_t> reduced(2);
      for (std::size_t j = 0; j < 2; ++j) reduced[j] = mod64(c.source[j], b.moduli[j]);
      CHECK(c.residue == crt_tau(b.moduli, reduced));
      const auto direct = dts_truncate(b.modulus(), c.residue, b.window.size());
      const auto mine = member_polynomial(b, i);
      CHECK(mine == direct);
      CHECK(poly_l2_norm(mine) <= 1.0);
      CHECK(b.members[i].norm_sq == doctest::Approx(std::pow(poly_l2_norm(mine), 2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("assign_shifts examples") {
  auto make = [](int k, std::int64_t p, TruncationWindow w, std::vector<std::int64_t> residues) {
    BlockPlan b;
    b.k = k;
    b.moduli = CoprimeModuli({p});
    b.window = w;
    for (auto r : residues) {
      PlanMember m;
      m.components.push_back({{r}, r, 1.0, 0, 0});
      b.members.push_back(m);
    }
    return b;
  };
  {
    std::vector<BlockPlan> one{make(0, 7, {-1, 1}, {3})};
    CHECK(assign_shifts(one) == std::vector<Wide>{0});
  }
  {
    // Both raw spectra contain 1.
    std::vector<BlockPlan> two{make(0, 5, {0, 0}, {1}), make(1, 7, {-1, 0}, {1, 4})};
    const auto shifts = assign_shifts(two);
    CHECK(shifts[0] == 0);
    CHECK(shifts[1] >= 1 - (1 - 7) + 1);
    CHECK(shifts[1] == 8);
  }
  {
    std::vector<BlockPlan> apart{make(0, 5, {0, 0}, {2}), make(1, 7, {0, 1}, {1, 3})};
    CHECK(assign_shifts(apart) == std::vector<Wide>{0, 0});
  }
}

TEST_CASE("offsets follow the 4^k recurrence") {
  const auto input = MultiIndexSequence::rc(1, scalars({1, -1, 2, -2, 3, -3, 4, -4}));
  const auto plan = build_reduction(input, 8);
  CHECK(plan.offsets() == std::vector<std::int64_t>{0, 1, 5, 9, 25, 41, 57, 73, 137});
  CHECK(plan.offset(8) <= 8 * 8 * 8 * 8);

  const auto single = build_reduction(MultiIndexSequence::rc(1, scalars({5})), 1);
  CHECK(single.offsets() == std::vector<std::int64_t>{0, 1});
  CHECK(single.blocks()[0].shift == 0);
  CHECK_THROWS_AS(build_reduction(input, 9), std::domain_error);
  CHECK_THROWS_AS(build_reduction(input, 0), std::domain_error);
}

TEST_CASE("plans pass every structural check") {
  std::mt19937_64 rng(12);
  for (std::size_t d : {1, 2, 3}) {
    for (std::int64_t n : {1, 2, 7, 31, 100}) {
      const auto idx = random_multi_indices(d, static_cast<std::size_t>(n), d == 1 ? n : 12, rng());
      const auto plan = build_reduction(MultiIndexSequence::rc(d, idx), n);
      const auto report = check_plan_structure(plan);
      CHECK(report.passed());
      CHECK(report.exhaustive);
      CHECK(report.norms_summed);
      CHECK(report.worst_slot_norm_sq <= 1.0 + 1e-12);
      for (const auto& msg : report.messages) MESSAGE(msg);
    }
  }
}

TEST_CASE("term lookup agrees with slot iteration") {
  const auto plan = build_reduction(MultiIndexSequence::rc(2, random_multi_indices(2, 20, 5, 3)), 20);
  for (std::int64_t n = 1; n <= 20; ++n) {
    plan.for_each_term(n, [&](std::int64_t s, const PlanTerm& t) {
      const auto u = plan.term(s);
      CHECK(u.frequency == t.frequency);
      CHECK(u.coeff == t.coeff);
    });
  }
  const auto g5 = plan.slot_polynomial(5);
  const auto& b = plan.block_of(5);
  CHECK(g5 == member_polynomial(b, 1).modulated({narrow_int64(b.shift)}));
}

TEST_CASE("SRC mode plans") {
  std::vector<TrigPolynomial> polys;
  std::int64_t next = 1;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  for (int n = 0; n < 12; ++n) {
    TrigPolynomial p(2);
    const int terms = 1 + n % 3;
    for (int t = 0; t < terms; ++t) {
      p.add({next % 7 - 3, next / 7 - 2}, cd(gauss(rng), gauss(rng)));
      ++next;
    }
    polys.push_back(p);
  }
  const auto input = MultiIndexSequence::src(2, polys);
  for (const auto& p : input.polys()) CHECK(poly_l2_norm(p) <= 1.0 + 1e-15);
  const auto plan = build_reduction(input, 12);
  const auto report = check_plan_structure(plan);
  CHECK(report.passed());
  for (const auto& b : plan.blocks()) {
    CHECK(b.eps_trunc <= std::ldexp(1.0, -b.k - 1));
    CHECK(b.eps <= std::ldexp(1.0, -b.k));
  }
  // Overlapping spectra are rejected.
  CHECK_THROWS_AS(MultiIndexSequence::src(1, {TrigPolynomial::monomial({1}), TrigPolynomial::monomial({1})}),
                  std::domain_error);
}

TEST_CASE("map_coefficients examples") {
  const auto plan = build_reduction(MultiIndexSequence::rc(1, scalars({2, 5, -3})), 3);
  {
    const std::vector<cd> a{1.0, 0.0, 0.0};
    const auto c = map_coefficients(plan, a);
    plan.for_each_term(1, [&](std::int64_t s, const PlanTerm& t) { CHECK(c[static_cast<std::size_t>(s - 1)] == t.coeff); });
    for (std::size_t s = static_cast<std::size_t>(plan.offset(2)); s < c.size(); ++s) CHECK(c[s] == 0.0);
  }
  {
    const std::vector<cd> zero(3, 0.0);
    for (const auto& v : map_coefficients(plan, zero)) CHECK(v == 0.0);
  }
  {
    const auto two = build_reduction(MultiIndexSequence::rc(1, scalars({2, 5})), 2);
    const std::vector<cd> a{1.0, 0.5};
    const auto c = map_coefficients(two, a);
    // Oracle: expand a_1 g_1 + a_2 g_2 and read the coefficients back.
    const auto sum = two.slot_polynomial(1) + two.slot_polynomial(2).scaled(0.5);
    for (std::int64_t s = 1; s <= two.total_terms(); ++s) {
      const auto t = two.term(s);
      CHECK(c[static_cast<std::size_t>(s - 1)] == sum.coefficient({narrow_int64(t.frequency)}));
      if (s > two.offset(2)) CHECK(c[static_cast<std::size_t>(s - 1)] == 0.5 * t.coeff);
    }
  }
  const std::vector<cd> too_long(4, 1.0);
  CHECK_THROWS_AS(map_coefficients(plan, too_long), std::domain_error);
}

TEST_CASE("series reorganization identity on a 1024-point grid") {
  for (std::size_t d : {1, 2}) {
    const auto plan = build_reduction(MultiIndexSequence::rc(d, random_multi_indices(d, 40, d == 1 ? 40 : 8, 77 + d)), 40);
    std::vector<cd> a;
    for (int n = 1; n <= 40; ++n) a.emplace_back(1.0 / n, 0.3 / (n * n));
    const auto c = map_coefficients(plan, a);
    TrigPolynomial slotwise(1);
    for (std::int64_t n = 1; n <= 40; ++n) slotwise = slotwise + plan.slot_polynomial(n).scaled(a[static_cast<std::size_t>(n - 1)]);
    std::vector<std::int64_t> freq;
    for (std::int64_t s = 1; s <= plan.total_terms(); ++s) freq.push_back(narrow_int64(mod_wide(plan.term(s).frequency, 1024)));
    std::vector<cd> root(1024);
    for (int t = 0; t < 1024; ++t) root[static_cast<std::size_t>(t)] = Phase(t, 1024).value();
    double worst = 0;
    for (int i = 0; i < 1024; ++i) {
      const double x = i / 1024.0;
      cd flat{};
      for (std::size_t s = 0; s < freq.size(); ++s) flat += c[s] * root[static_cast<std::size_t>(freq[s] * i % 1024)];
      worst = std::max(worst, std::abs(flat - poly_eval(slotwise, x)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("weight transfer") {
  const auto idx = random_multi_indices(2, 256, 10, 5);
  const auto plan = build_reduction(MultiIndexSequence::rc(2, idx), 256);
  {
    std::vector<cd> a(256, 0.0);
    a[0] = 1.0;
    for (const auto& w : {WeightSequence::log1(), WeightSequence::log2(), WeightSequence::power(0.5)}) {
      const auto r = verify_weight_transfer(plan, a, w);
      CHECK(r.holds);
      CHECK(r.lhs <= w(plan.offset(2)) + 1e-15);
    }
  }
  std::vector<cd> a;
  for (int n = 1; n <= 256; ++n) a.emplace_back(1.0 / n, 0.0);
  const auto r = verify_weight_transfer(plan, a, WeightSequence::log2());
  MESSAGE("C* = " << r.c_star << " at n = " << r.c_star_argmax);
  CHECK(r.c_star <= 17.0);
  CHECK(r.holds);
  CHECK_THROWS_AS(verify_weight_transfer(plan, a, WeightSequence::constant(1.0)), std::domain_error);
}

TEST_CASE("block certificates") {
  {
    const auto plan = build_reduction(MultiIndexSequence::rc(3, {{0, 0, 0}}), 1);
    const auto cert = block_equivalence_certificate(plan, 0);
    CHECK(cert.eps == 0.0);
    CHECK(cert.passed);
    CHECK(cert.correspondence_exhaustive);
  }
  const auto plan = build_reduction(MultiIndexSequence::rc(2, random_multi_indices(2, 63, 7, 1)), 63);
  for (int k = 0; k <= 5; ++k) {
    const auto cert = block_equivalence_certificate(plan, k);
    CHECK(cert.passed);
    CHECK(cert.eps <= kBlockErrorConstant * std::ldexp(1.0, -k));
    CHECK(cert.cells_checked > 0);
    for (const auto& m : cert.members) CHECK(m.total == doctest::Approx(m.disc_error + m.trunc_error));
  }
  CHECK_THROWS_AS(block_equivalence_certificate(plan, 6), std::domain_error);
}

TEST_CASE("shifts leave block errors unchanged") {
  // Block 0 gets p = 13 and residue 12; block 1 has residues 12 and 5.
  auto idx = scalars({-1, 12, 5});
  for (const auto& f : random_multi_indices(1, 28, 60, 2)) {
    if (f[0] != -1 && f[0] != 12 && f[0] != 5) idx.push_back(f);
  }
  const auto input = MultiIndexSequence::rc(1, idx);
  const auto plan = build_reduction(input, 31);
  CHECK(plan.blocks()[0].modulus() == 13);
  CHECK(plan.blocks()[1].shift == 12 - (5 - 2 * plan.blocks()[1].modulus()) + 1);
  bool some_shift = false;
  for (const auto& b : plan.blocks()) {
    some_shift = some_shift || b.shift != 0;
    const auto fresh = build_block(input, b.k, 31);
    CHECK(fresh.eps == b.eps);
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      const auto shifted = member_polynomial(b, i, true);
      CHECK(shifted.modulated({-narrow_int64(b.shift)}) == member_polynomial(b, i, false));
      CHECK(poly_l2_norm(shifted) == poly_l2_norm(member_polynomial(b, i, false)));
    }
  }
  CHECK(some_shift);
}
