#pragma once

// Reduction of a d-dimensional trigonometric (RC) or non-overlapping
// polynomial (SRC) sequence to a one-dimensional non-overlapping polynomial
// system g_1, g_2, ... with flat coefficient and frequency sequences b_s, m_s.
//
// Members n in [2^k, 2^{k+1}) form block k. Each block gets pairwise coprime
// prime moduli p_1..p_d; every input frequency vector nu is discretized to
// the multiple DTS function t_{nu mod p}, carried to t_{r}^{(p)} with
// r = tau(nu mod p), truncated to a window of progression steps j and shifted
// by an integer frequency. The block plan is symbolic: the terms of a member
// are
//   m = shift + r + p*j,   b = weight * c_{r+p*j}(t_r^{(p)}),   lo <= j <= hi
// for each component (r, weight), listed component by component, j
// ascending.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trigeq/arith.hpp"
#include "trigeq/crt.hpp"
#include "trigeq/dts.hpp"
#include "trigeq/trig_poly.hpp"
#include "trigeq/weights.hpp"

namespace trigeq {

enum class ReductionMode { RC, SRC };

std::string to_string(ReductionMode mode);
ReductionMode parse_mode(const std::string& text);

/// Block error constant K in eps_k <= K * 2^{-k}.
inline constexpr double kBlockErrorConstant = 1.5;

class MultiIndexSequence {
 public:
  /// Pairwise distinct frequency vectors of one dimension.
  static MultiIndexSequence rc(std::size_t dim, std::vector<Frequency> indices);
  /// Polynomials with pairwise disjoint spectra; any polynomial of norm > 1
  /// is scaled to norm 1.
  static MultiIndexSequence src(std::size_t dim, std::vector<TrigPolynomial> polys);

  ReductionMode mode() const { return mode_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return mode_ == ReductionMode::RC ? indices_.size() : polys_.size(); }
  const std::vector<Frequency>& indices() const { return indices_; }
  const std::vector<TrigPolynomial>& polys() const { return polys_; }

  /// Input n (1-based) as a polynomial; RC entries are monomials.
  TrigPolynomial entry(std::int64_t n) const;

 private:
  MultiIndexSequence(ReductionMode mode, std::size_t dim) : mode_(mode), dim_(dim) {}

  ReductionMode mode_;
  std::size_t dim_;
  std::vector<Frequency> indices_;
  std::vector<TrigPolynomial> polys_;
};

/// Seeded distinct frequency vectors with components in [-radius, radius].
std::vector<Frequency> random_multi_indices(std::size_t dim, std::size_t count, std::int64_t radius, std::uint64_t seed);

/// Smallest admissible distinct primes p_j > max |nu_j| with
/// sum_j 2 pi max|nu_j| / p_j <= eps over the given frequency vectors.
CoprimeModuli choose_block_moduli(std::span<const Frequency> block, double eps);

/// Exact L2 distance between exp(2 pi i <nu, x>) and the multiple DTS
/// function t_{nu mod p}.
double discretization_error(const CoprimeModuli& moduli, const Frequency& nu);

struct PlanComponent {
  Frequency source;
  std::int64_t residue = 0;
  std::complex<double> weight = 1.0;
  double disc_error = 0;
  double trunc_error = 0;
};

struct PlanMember {
  std::int64_t n = 0;
  std::vector<PlanComponent> components;
  /// Triangle bound sum |weight| disc over components.
  double disc_error = 0;
  /// Exact L2 truncation error (components have disjoint spectra).
  double trunc_error = 0;
  /// ||bar f_n||^2.
  double norm_sq = 0;

  double error() const { return disc_error + trunc_error; }
};

struct BlockPlan {
  int k = 0;
  CoprimeModuli moduli{{2}};
  TruncationWindow window;
  Wide shift = 0;
  std::vector<PlanMember> members;
  /// Discretization target the moduli were chosen for.
  double disc_target = 0;
  double eps = 0;
  double eps_disc = 0;
  double eps_trunc = 0;

  std::int64_t modulus() const { return moduli.product(); }
  std::int64_t slot_size(std::size_t member) const {
    return static_cast<std::int64_t>(members[member].components.size()) * window.size();
  }
  /// Smallest and largest unshifted frequency.
  Wide raw_min() const;
  Wide raw_max() const;
  /// Frequency progressions of every component, shifted.
  std::vector<Progression> progressions() const;
};

/// Builds block k over inputs n in [2^k, min(2^{k+1}-1, n_max)]: moduli,
/// residues, window and errors. Shift is left at 0. Given moduli replace the
/// automatic choice. Throws PreconditionError if the moduli miss the
/// discretization target or two components of the block share a residue.
BlockPlan build_block(const MultiIndexSequence& input, int k, std::int64_t n_max,
                      const std::optional<CoprimeModuli>& moduli = std::nullopt);

/// 2^{-k-1}, divided in SRC mode by the largest member l1 weight above 1.
double block_disc_target(int k, ReductionMode mode, const std::vector<PlanMember>& members);

/// Given k, moduli and members (n, source, weight), recomputes the
/// discretization target, residues, window and errors. Same checks as
/// build_block with fixed moduli.
void finish_block(BlockPlan& b, ReductionMode mode);

/// Member polynomials of a block, unshifted or shifted; needs every
/// frequency to fit in int64.
std::vector<TrigPolynomial> build_block_polys(const BlockPlan& block, bool shifted = false);
TrigPolynomial member_polynomial(const BlockPlan& block, std::size_t member, bool shifted = false);

/// Per block: 0 when its spectra miss everything already placed, otherwise
/// the translation putting its minimum one past the running maximum. Writes
/// the shifts into the blocks and returns them.
std::vector<Wide> assign_shifts(std::vector<BlockPlan>& blocks);

struct PlanTerm {
  Wide frequency;
  std::complex<double> coeff;
};

class ReductionPlan {
 public:
  ReductionPlan(ReductionMode mode, std::size_t dim, std::int64_t n_max, std::vector<BlockPlan> blocks);

  ReductionMode mode() const { return mode_; }
  std::size_t dim() const { return dim_; }
  std::int64_t n_max() const { return n_max_; }
  const std::vector<BlockPlan>& blocks() const { return blocks_; }
  const BlockPlan& block(int k) const;

  /// s_1 .. s_{N+1}; offsets()[n-1] = s_n.
  const std::vector<std::int64_t>& offsets() const { return offsets_; }
  std::int64_t offset(std::int64_t n) const { return offsets_.at(static_cast<std::size_t>(n - 1)); }
  std::int64_t total_terms() const { return offsets_.back(); }

  const BlockPlan& block_of(std::int64_t n) const;
  const PlanMember& member(std::int64_t n) const;

  /// Visits the terms of slot n in order s = s_n + 1 .. s_{n+1}.
  void for_each_term(std::int64_t n, const std::function<void(std::int64_t s, const PlanTerm&)>& visit) const;
  PlanTerm term(std::int64_t s) const;
  /// g_n; needs int64 frequencies.
  TrigPolynomial slot_polynomial(std::int64_t n) const;

 private:
  ReductionMode mode_;
  std::size_t dim_;
  std::int64_t n_max_;
  std::vector<BlockPlan> blocks_;
  std::vector<std::int64_t> offsets_;
};

ReductionPlan build_reduction(const MultiIndexSequence& input, std::int64_t n_max);

struct PlanStructureReport {
  std::int64_t slots = 0;
  std::int64_t total_terms = 0;
  std::size_t offset_violations = 0;
  std::size_t growth_violations = 0;
  std::size_t norm_violations = 0;
  std::size_t residue_collisions = 0;
  std::size_t overlap_violations = 0;
  std::size_t error_violations = 0;
  double worst_slot_norm_sq = 0;
  /// max_k eps_k 2^k.
  double worst_scaled_error = 0;
  std::size_t progression_tests = 0;
  /// Slot norms summed term by term (true) or from the closed form.
  bool norms_summed = false;
  /// Every m_s materialized and compared.
  bool exhaustive = false;
  std::vector<std::string> messages;

  bool passed() const {
    return offset_violations == 0 && growth_violations == 0 && norm_violations == 0 && residue_collisions == 0 &&
           overlap_violations == 0 && error_violations == 0;
  }
};

/// Checks offsets, s_n <= n^4 (RC), slot norms, the block error law and
/// global spectral disjointness. The disjointness test is exact: residues
/// are distinct within a block and progressions are intersected across
/// blocks. Plans with at most exhaustive_limit terms are also checked by
/// listing every m_s.
PlanStructureReport check_plan_structure(const ReductionPlan& plan, std::int64_t exhaustive_limit = 1 << 20);

/// c_s = a_n b_s over all slots; a.size() <= N. Slots past a.size() are 0.
std::vector<std::complex<double>> map_coefficients(const ReductionPlan& plan, std::span<const std::complex<double>> a);

struct WeightTransferReport {
  double lhs = 0;
  double rhs = 0;
  double c_star = 0;
  std::int64_t c_star_argmax = 0;
  bool holds = false;
};

/// LHS = sum_s |c_s|^2 w(s), RHS = sum_n |a_n|^2 w(n),
/// C* = max_n w(s_{n+1}) / w(n).
WeightTransferReport verify_weight_transfer(const ReductionPlan& plan, std::span<const std::complex<double>> a,
                                            const WeightSequence& w);

struct MemberCertificate {
  std::int64_t n = 0;
  std::vector<Frequency> sources;
  std::vector<std::int64_t> residues;
  double disc_error = 0;
  double trunc_error = 0;
  double total = 0;
};

struct BlockCertificate {
  int k = 0;
  std::vector<std::int64_t> moduli;
  std::vector<MemberCertificate> members;
  double eps = 0;
  double eps_disc = 0;
  double eps_trunc = 0;
  double bound = 0;
  /// Cells on which the multiple DTS / 1-d DTS congruence was checked.
  std::int64_t cells_checked = 0;
  bool correspondence_exhaustive = false;
  bool passed = false;
};

/// Witness chain for block k: exact congruence check of the CRT
/// correspondence for every member (all cells when p <= exhaustive_cells,
/// seeded sample otherwise) and the per-member error split.
BlockCertificate block_equivalence_certificate(const ReductionPlan& plan, int k, std::int64_t exhaustive_cells = 4096);

}  // namespace trigeq
