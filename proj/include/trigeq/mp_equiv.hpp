#pragma once

// Measure-preserving cell maps between finite uniform partitions, the step
// functions they act on, and exact probabilistic-equivalence checks.

#include <boost/rational.hpp>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trigeq/phase.hpp"
#include "trigeq/trig_poly.hpp"

namespace trigeq {

using Rational = boost::rational<std::int64_t>;

/// Uniform partition of the unit cube into q_1 x ... x q_d half-open boxes.
/// Cells are numbered row-major (last axis fastest).
class CellPartition {
 public:
  explicit CellPartition(std::vector<std::int64_t> counts);

  std::size_t dim() const { return counts_.size(); }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t cell_count() const { return total_; }
  Rational cell_measure() const { return {1, total_}; }

  std::int64_t index_of(std::span<const std::int64_t> cell) const;
  std::vector<std::int64_t> cell_of(std::int64_t index) const;

  friend bool operator==(const CellPartition&, const CellPartition&) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 1;
};

/// Value of a step function on one cell: an exact root of unity when the
/// value comes from a DTS, an arbitrary complex number otherwise. Complex
/// values that are exact quarter turns are stored as roots of unity so both
/// representations of e.g. 1 compare equal.
class CellValue {
 public:
  CellValue() : CellValue(Phase{}) {}
  CellValue(Phase phase) : v_(phase) {}  // NOLINT(google-explicit-constructor)
  CellValue(std::complex<double> z);     // NOLINT(google-explicit-constructor)
  CellValue(double x) : CellValue(std::complex<double>(x, 0.0)) {}  // NOLINT(google-explicit-constructor)

  bool is_root_of_unity() const { return std::holds_alternative<Phase>(v_); }
  const Phase& phase() const { return std::get<Phase>(v_); }
  std::complex<double> value() const;

  friend CellValue operator*(const CellValue& a, const CellValue& b);
  friend CellValue operator+(const CellValue& a, const CellValue& b);

  friend bool operator==(const CellValue& a, const CellValue& b);
  friend bool operator<(const CellValue& a, const CellValue& b);

 private:
  std::variant<Phase, std::complex<double>> v_;
};

class StepFunction {
 public:
  StepFunction(CellPartition partition, std::vector<CellValue> values);
  static StepFunction constant(CellPartition partition, CellValue value);
  static StepFunction indicator(CellPartition partition, std::int64_t cell);

  const CellPartition& partition() const { return partition_; }
  const std::vector<CellValue>& values() const { return values_; }
  const CellValue& at(std::int64_t cell) const { return values_.at(static_cast<std::size_t>(cell)); }

  /// (1/Q) sum |value|^2.
  double l2_norm_sq() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  CellPartition partition_;
  std::vector<CellValue> values_;
};

StepFunction operator*(const StepFunction& f, const StepFunction& g);
StepFunction operator+(const StepFunction& f, const StepFunction& g);
StepFunction scale(const StepFunction& f, std::complex<double> factor);

/// Raw assignment of source cells to target cells, not necessarily
/// bijective. Used to probe the measure-preservation axioms.
struct CellAssignment {
  CellPartition source;
  CellPartition target;
  std::vector<std::int64_t> image;
};

/// Bijection between the cells of two partitions with equal cell counts.
class MPCellMap {
 public:
  MPCellMap(CellPartition source, CellPartition target, std::vector<std::int64_t> image);
  static MPCellMap identity(const CellPartition& partition);

  const CellPartition& source() const { return a_.source; }
  const CellPartition& target() const { return a_.target; }
  std::int64_t operator()(std::int64_t cell) const { return a_.image[static_cast<std::size_t>(cell)]; }
  const std::vector<std::int64_t>& image() const { return a_.image; }
  const CellAssignment& assignment() const { return a_; }

  MPCellMap inverse() const;

 private:
  CellAssignment a_;
};

StepFunction mp_apply(const MPCellMap& map, const StepFunction& f);

struct AxiomViolation {
  std::string identity;
  std::vector<std::int64_t> set_e;
  std::vector<std::int64_t> set_f;
  Rational source_measure;
  Rational target_measure;
};

struct AxiomReport {
  static constexpr std::size_t kMaxWitnesses = 32;

  std::size_t checks = 0;
  std::size_t failures = 0;
  /// First kMaxWitnesses failing cases.
  std::vector<AxiomViolation> violations;

  bool passed() const { return failures == 0; }
  void record(AxiomViolation v);
};

/// Checks mu(E) = nu(Theta E), the union axiom and the derived difference,
/// finite-union and intersection identities on `trials` random cell unions.
AxiomReport mp_check_axioms(const CellAssignment& map, std::size_t trials, std::uint64_t seed = 0);
inline AxiomReport mp_check_axioms(const MPCellMap& map, std::size_t trials, std::uint64_t seed = 0) {
  return mp_check_axioms(map.assignment(), trials, seed);
}

/// Same identities for every pair of cell unions; source partition must have
/// at most 12 cells.
AxiomReport mp_check_axioms_exhaustive(const CellAssignment& map);

/// Finite joint distribution: value tuples with the exact measure of the set
/// where the functions take them, sorted by tuple.
struct DistributionAtom {
  std::vector<CellValue> values;
  Rational measure;

  friend bool operator==(const DistributionAtom&, const DistributionAtom&) = default;
};

struct Distribution {
  std::vector<DistributionAtom> atoms;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

Distribution joint_distribution(std::span<const StepFunction> fs);

bool verify_prob_equiv(std::span<const StepFunction> fs, std::span<const StepFunction> gs);

/// Exact L2 distance of two step functions on their common refinement.
double l2_distance(const StepFunction& f, const StepFunction& g);
/// Parseval distance.
double l2_distance(const TrigPolynomial& f, const TrigPolynomial& g);
/// Distance between a step function and a trigonometric polynomial, via the
/// closed-form Fourier coefficients of the step function.
double l2_distance(const StepFunction& f, const TrigPolynomial& g);

/// Fourier coefficient of a step function at a frequency vector.
std::complex<double> step_fourier_coeff(const StepFunction& f, std::span<const std::int64_t> freq);

}  // namespace trigeq
