#include "trigeq/mp_equiv.hpp"

#include <algorithm>
#include <bit>
#include <boost/dynamic_bitset.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "trigeq/arith.hpp"

namespace trigeq {

CellPartition::CellPartition(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw std::domain_error("CellPartition: at least one axis required");
  for (auto q : counts_) {
    if (q < 1) throw std::domain_error("CellPartition: cell counts must be positive");
    total_ = checked_mul(total_, q);
  }
}

std::int64_t CellPartition::index_of(std::span<const std::int64_t> cell) const {
  if (cell.size() != counts_.size()) throw std::domain_error("CellPartition: cell dimension mismatch");
  std::int64_t idx = 0;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    if (cell[j] < 0 || cell[j] >= counts_[j]) throw std::domain_error("CellPartition: cell index out of range");
    idx = idx * counts_[j] + cell[j];
  }
  return idx;
}

std::vector<std::int64_t> CellPartition::cell_of(std::int64_t index) const {
  if (index < 0 || index >= total_) throw std::domain_error("CellPartition: linear index out of range");
  std::vector<std::int64_t> cell(counts_.size());
  for (std::size_t j = counts_.size(); j-- > 0;) {
    cell[j] = index % counts_[j];
    index /= counts_[j];
  }
  return cell;
}

CellValue::CellValue(std::complex<double> z) : v_(z) {
  if (z == std::complex<double>(1.0, 0.0)) {
    v_ = Phase(0, 1);
  } else if (z == std::complex<double>(0.0, 1.0)) {
    v_ = Phase(1, 4);
  } else if (z == std::complex<double>(-1.0, 0.0)) {
    v_ = Phase(1, 2);
  } else if (z == std::complex<double>(0.0, -1.0)) {
    v_ = Phase(3, 4);
  }
}

std::complex<double> CellValue::value() const {
  if (const auto* p = std::get_if<Phase>(&v_)) return p->value();
  return std::get<std::complex<double>>(v_);
}

CellValue operator*(const CellValue& a, const CellValue& b) {
  if (a.is_root_of_unity() && b.is_root_of_unity()) return a.phase() * b.phase();
  return a.value() * b.value();
}

CellValue operator+(const CellValue& a, const CellValue& b) { return a.value() + b.value(); }

bool operator==(const CellValue& a, const CellValue& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.is_root_of_unity()) return a.phase() == b.phase();
  return std::get<std::complex<double>>(a.v_) == std::get<std::complex<double>>(b.v_);
}

bool operator<(const CellValue& a, const CellValue& b) {
  if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
  if (a.is_root_of_unity()) return a.phase() < b.phase();
  const auto& za = std::get<std::complex<double>>(a.v_);
  const auto& zb = std::get<std::complex<double>>(b.v_);
  if (za.real() != zb.real()) return za.real() < zb.real();
  return za.imag() < zb.imag();
}

StepFunction::StepFunction(CellPartition partition, std::vector<CellValue> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != partition_.cell_count()) {
    throw std::domain_error("StepFunction: one value per cell required");
  }
}

StepFunction StepFunction::constant(CellPartition partition, CellValue value) {
  const auto n = static_cast<std::size_t>(partition.cell_count());
  return {std::move(partition), std::vector<CellValue>(n, value)};
}

StepFunction StepFunction::indicator(CellPartition partition, std::int64_t cell) {
  const auto n = static_cast<std::size_t>(partition.cell_count());
  std::vector<CellValue> values(n, CellValue(0.0));
  values.at(static_cast<std::size_t>(cell)) = CellValue(1.0);
  return {std::move(partition), std::move(values)};
}

double StepFunction::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v.value());
  return s / static_cast<double>(partition_.cell_count());
}

namespace {

template <typename Op>
StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
  if (!(f.partition() == g.partition())) throw std::domain_error("StepFunction: partition mismatch");
  std::vector<CellValue> out;
  out.reserve(f.values().size());
  for (std::size_t i = 0; i < f.values().size(); ++i) out.push_back(op(f.values()[i], g.values()[i]));
  return {f.partition(), std::move(out)};
}

}  // namespace

StepFunction operator*(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](const CellValue& a, const CellValue& b) { return a * b; });
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  return combine(f, g, [](const CellValue& a, const CellValue& b) { return a + b; });
}

StepFunction scale(const StepFunction& f, std::complex<double> factor) {
  std::vector<CellValue> out;
  out.reserve(f.values().size());
  for (const auto& v : f.values()) out.emplace_back(v.value() * factor);
  return {f.partition(), std::move(out)};
}

MPCellMap::MPCellMap(CellPartition source, CellPartition target, std::vector<std::int64_t> image)
    : a_{std::move(source), std::move(target), std::move(image)} {
  const std::int64_t q = a_.source.cell_count();
  if (a_.target.cell_count() != q) throw std::domain_error("MPCellMap: partitions must have equal cell counts");
  if (static_cast<std::int64_t>(a_.image.size()) != q) throw std::domain_error("MPCellMap: one image per cell required");
  std::vector<bool> hit(static_cast<std::size_t>(q), false);
  for (auto c : a_.image) {
    if (c < 0 || c >= q) throw std::domain_error("MPCellMap: image cell out of range");
    if (hit[static_cast<std::size_t>(c)]) throw std::domain_error("MPCellMap: cell map is not injective");
    hit[static_cast<std::size_t>(c)] = true;
  }
}

MPCellMap MPCellMap::identity(const CellPartition& partition) {
  std::vector<std::int64_t> image(static_cast<std::size_t>(partition.cell_count()));
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = static_cast<std::int64_t>(i);
  return {partition, partition, std::move(image)};
}

MPCellMap MPCellMap::inverse() const {
  std::vector<std::int64_t> inv(a_.image.size());
  for (std::size_t i = 0; i < a_.image.size(); ++i) inv[static_cast<std::size_t>(a_.image[i])] = static_cast<std::int64_t>(i);
  return {a_.target, a_.source, std::move(inv)};
}

StepFunction mp_apply(const MPCellMap& map, const StepFunction& f) {
  if (!(f.partition() == map.source())) throw std::domain_error("mp_apply: function is not on the map's source partition");
  std::vector<CellValue> out(f.values().size());
  for (std::size_t c = 0; c < f.values().size(); ++c) out[static_cast<std::size_t>(map(static_cast<std::int64_t>(c)))] = f.values()[c];
  return {map.target(), std::move(out)};
}

void AxiomReport::record(AxiomViolation v) {
  ++failures;
  if (violations.size() < kMaxWitnesses) violations.push_back(std::move(v));
}

namespace {

using Bits = boost::dynamic_bitset<>;

std::vector<std::int64_t> members(const Bits& b) {
  std::vector<std::int64_t> out;
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.push_back(static_cast<std::int64_t>(i));
  return out;
}

class AxiomChecker {
 public:
  explicit AxiomChecker(const CellAssignment& map) : map_(map) {
    if (static_cast<std::int64_t>(map.image.size()) != map.source.cell_count()) {
      throw std::domain_error("CellAssignment: one image per source cell required");
    }
    for (auto c : map.image) {
      if (c < 0 || c >= map.target.cell_count()) throw std::domain_error("CellAssignment: image out of range");
    }
  }

  Bits image(const Bits& e) const {
    Bits out(static_cast<std::size_t>(map_.target.cell_count()));
    for (auto i = e.find_first(); i != Bits::npos; i = e.find_next(i)) out.set(static_cast<std::size_t>(map_.image[i]));
    return out;
  }

  Rational mu(const Bits& e) const { return {static_cast<std::int64_t>(e.count()), map_.source.cell_count()}; }
  Rational nu(const Bits& e) const { return {static_cast<std::int64_t>(e.count()), map_.target.cell_count()}; }

  void check(AxiomReport& report, const char* identity, const Bits& src, const Bits& tgt, const Bits& e,
             const Bits& f) const {
    ++report.checks;
    Rational a = mu(src);
    Rational b = nu(tgt);
    if (a != b) report.record({identity, members(e), members(f), a, b});
  }

  void check_pair(AxiomReport& report, const Bits& e, const Bits& f) const {
    const Bits te = image(e);
    const Bits tf = image(f);
    check(report, "measure", e, te, e, f);
    check(report, "union", e | f, te | tf, e, f);
    check(report, "difference", e - f, te - tf, e, f);
    check(report, "intersection", e & f, te & tf, e, f);
  }

 private:
  const CellAssignment& map_;
};

}  // namespace

AxiomReport mp_check_axioms(const CellAssignment& map, std::size_t trials, std::uint64_t seed) {
  AxiomChecker checker(map);
  AxiomReport report;
  std::mt19937_64 rng(seed);
  const auto q = static_cast<std::size_t>(map.source.cell_count());
  auto random_set = [&]() {
    Bits b(q);
    for (std::size_t i = 0; i < q; ++i) b[i] = (rng() & 1U) != 0;
    return b;
  };
  constexpr std::size_t kFamily = 4;
  for (std::size_t t = 0; t < trials; ++t) {
    const Bits e = random_set();
    const Bits f = random_set();
    checker.check_pair(report, e, f);
    // Finite unions and intersections over a small family.
    std::vector<Bits> family;
    for (std::size_t i = 0; i < kFamily; ++i) family.push_back(random_set());
    Bits u(q), in(q), tu(static_cast<std::size_t>(map.target.cell_count()));
    in.set();
    Bits tin = tu;
    tin.set();
    for (const auto& s : family) {
      u |= s;
      in &= s;
      const Bits ts = checker.image(s);
      tu |= ts;
      tin &= ts;
    }
    checker.check(report, "finite union", u, tu, family[0], family[1]);
    checker.check(report, "finite intersection", in, tin, family[0], family[1]);
  }
  return report;
}

AxiomReport mp_check_axioms_exhaustive(const CellAssignment& map) {
  AxiomChecker checker(map);
  const std::int64_t q = map.source.cell_count();
  const std::int64_t qt = map.target.cell_count();
  if (q > 12 || qt > 64) throw std::domain_error("mp_check_axioms_exhaustive: at most 12 source and 64 target cells");
  const std::uint64_t subsets = std::uint64_t{1} << q;
  std::vector<std::uint64_t> img(subsets, 0);
  for (std::uint64_t s = 1; s < subsets; ++s) {
    const int low = std::countr_zero(s);
    img[s] = img[s & (s - 1)] | (std::uint64_t{1} << map.image[static_cast<std::size_t>(low)]);
  }
  auto to_bits = [](std::uint64_t mask, std::int64_t width) {
    Bits b(static_cast<std::size_t>(width));
    for (std::int64_t i = 0; i < width; ++i) b[static_cast<std::size_t>(i)] = ((mask >> i) & 1U) != 0;
    return b;
  };
  AxiomReport report;
  auto check = [&](const char* name, std::uint64_t src, std::uint64_t tgt, std::uint64_t e, std::uint64_t f) {
    ++report.checks;
    Rational a(std::popcount(src), q);
    Rational b(std::popcount(tgt), qt);
    if (a != b) report.record({name, members(to_bits(e, q)), members(to_bits(f, q)), a, b});
  };
  for (std::uint64_t e = 0; e < subsets; ++e) {
    check("measure", e, img[e], e, 0);
    for (std::uint64_t f = 0; f < subsets; ++f) {
      check("union", e | f, img[e] | img[f], e, f);
      check("difference", e & ~f, img[e] & ~img[f], e, f);
      check("intersection", e & f, img[e] & img[f], e, f);
    }
  }
  return report;
}

Distribution joint_distribution(std::span<const StepFunction> fs) {
  if (fs.empty()) return {{DistributionAtom{{}, Rational(1)}}};
  const CellPartition& part = fs.front().partition();
  for (const auto& f : fs) {
    if (!(f.partition() == part)) throw std::domain_error("joint_distribution: functions live on different partitions");
  }
  std::map<std::vector<CellValue>, std::int64_t> counts;
  const auto q = static_cast<std::size_t>(part.cell_count());
  std::vector<CellValue> tuple(fs.size());
  for (std::size_t c = 0; c < q; ++c) {
    for (std::size_t i = 0; i < fs.size(); ++i) tuple[i] = fs[i].values()[c];
    ++counts[tuple];
  }
  Distribution out;
  out.atoms.reserve(counts.size());
  for (auto& [values, count] : counts) out.atoms.push_back({values, Rational(count, part.cell_count())});
  return out;
}

bool verify_prob_equiv(std::span<const StepFunction> fs, std::span<const StepFunction> gs) {
  if (fs.size() != gs.size()) throw std::domain_error("verify_prob_equiv: sequences differ in length");
  return joint_distribution(fs) == joint_distribution(gs);
}

double l2_distance(const StepFunction& f, const StepFunction& g) {
  const auto& qa = f.partition().counts();
  const auto& qb = g.partition().counts();
  if (qa.size() != qb.size()) throw std::domain_error("l2_distance: step functions of different dimension");
  std::vector<std::int64_t> fine(qa.size());
  for (std::size_t j = 0; j < qa.size(); ++j) fine[j] = lcm64(qa[j], qb[j]);
  const CellPartition refined(fine);
  double s = 0.0;
  std::vector<std::int64_t> ca(qa.size()), cb(qa.size());
  for (std::int64_t idx = 0; idx < refined.cell_count(); ++idx) {
    const auto cell = refined.cell_of(idx);
    for (std::size_t j = 0; j < qa.size(); ++j) {
      ca[j] = cell[j] / (fine[j] / qa[j]);
      cb[j] = cell[j] / (fine[j] / qb[j]);
    }
    s += std::norm(f.at(f.partition().index_of(ca)).value() - g.at(g.partition().index_of(cb)).value());
  }
  return std::sqrt(s / static_cast<double>(refined.cell_count()));
}

double l2_distance(const TrigPolynomial& f, const TrigPolynomial& g) { return poly_distance(f, g); }

std::complex<double> step_fourier_coeff(const StepFunction& f, std::span<const std::int64_t> freq) {
  const auto& q = f.partition().counts();
  if (freq.size() != q.size()) throw std::domain_error("step_fourier_coeff: dimension mismatch");
  // Per axis: integral of exp(-2 pi i m x) over [k/q, (k+1)/q) equals
  // exp(-2 pi i m k / q) * I_q(m), I_q(0) = 1/q.
  std::vector<std::complex<double>> integral(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (freq[j] == 0) {
      integral[j] = 1.0 / static_cast<double>(q[j]);
    } else {
      integral[j] = (1.0 - Phase(-freq[j], q[j]).value()) /
                    std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(freq[j]));
    }
  }
  std::complex<double> s{};
  for (std::int64_t idx = 0; idx < f.partition().cell_count(); ++idx) {
    const auto cell = f.partition().cell_of(idx);
    std::complex<double> term = f.at(idx).value();
    for (std::size_t j = 0; j < q.size(); ++j) term *= Phase(-mul_mod(mod64(freq[j], q[j]), cell[j], q[j]), q[j]).value() * integral[j];
    s += term;
  }
  return s;
}

double l2_distance(const StepFunction& f, const TrigPolynomial& g) {
  if (f.partition().dim() != g.dim()) throw std::domain_error("l2_distance: dimension mismatch");
  std::complex<double> cross{};
  for (const auto& [freq, c] : g.terms()) cross += std::conj(c) * step_fourier_coeff(f, freq);
  const double d2 = f.l2_norm_sq() + std::pow(poly_l2_norm(g), 2) - 2.0 * cross.real();
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace trigeq
