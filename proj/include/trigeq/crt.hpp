#pragma once

// Chinese-remainder reindexing of a multiple DTS as a one-dimensional DTS.
//
// For pairwise coprime p_1..p_d with p = p_1...p_d:
//   tau(n)     = the l in [0, p) with l = n_j (mod p_j) for all j
//   tau_bar(u) = tau(u) * q mod p,  q = sum_j p / p_j
// and the cell map u -> tau_bar(u) carries t_n^{(p_1..p_d)} onto t_{tau(n)}^{(p)}.

#include <cstdint>
#include <span>
#include <vector>

#include "trigeq/mp_equiv.hpp"

namespace trigeq {

class CoprimeModuli {
 public:
  /// Throws std::invalid_argument unless every modulus is >= 2 and the
  /// moduli are pairwise coprime.
  explicit CoprimeModuli(std::vector<std::int64_t> moduli);

  std::size_t dim() const { return moduli_.size(); }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  std::int64_t operator[](std::size_t j) const { return moduli_[j]; }
  std::int64_t product() const { return product_; }

  /// q = sum_j p / p_j reduced mod p.
  std::int64_t twist() const { return twist_; }

  friend bool operator==(const CoprimeModuli& a, const CoprimeModuli& b) { return a.moduli_ == b.moduli_; }

 private:
  friend std::int64_t crt_tau(const CoprimeModuli&, std::span<const std::int64_t>);

  std::vector<std::int64_t> moduli_;
  std::int64_t product_ = 1;
  std::int64_t twist_ = 0;
  // (p / p_j) * ((p / p_j)^{-1} mod p_j), the CRT idempotents.
  std::vector<std::int64_t> basis_;
};

std::int64_t crt_tau(const CoprimeModuli& moduli, std::span<const std::int64_t> residues);
std::vector<std::int64_t> crt_tau_inverse(const CoprimeModuli& moduli, std::int64_t l);

std::int64_t crt_tau_bar(const CoprimeModuli& moduli, std::span<const std::int64_t> residues);
std::vector<std::int64_t> crt_tau_bar_inverse(const CoprimeModuli& moduli, std::int64_t u);

/// Cell bijection from the p_1 x ... x p_d partition to the p-cell partition
/// of the circle, cell u_vec -> tau_bar(u_vec).
MPCellMap build_theta(const CoprimeModuli& moduli);

/// The DTS function t_n as an exact step function on its own cells.
StepFunction dts_step_function(const std::vector<std::int64_t>& axis_orders, std::span<const std::int64_t> n_vec);
StepFunction dts_step_function(std::int64_t l, std::int64_t n);

/// Returns tau(n_vec) after checking, for every cell u_vec, the congruence
///   sum_j n_j u_j (p/p_j) = tau(n_vec) * tau_bar(u_vec)  (mod p)
/// and that build_theta carries t_{n_vec} cell-for-cell onto t_{tau(n_vec)}.
/// Throws ConsistencyError on any mismatch.
std::int64_t dts_correspondence(const CoprimeModuli& moduli, std::span<const std::int64_t> n_vec);

/// Full multiple DTS (all p functions in row-major index order) and the
/// one-dimensional DTS functions t_{tau(n)} in the same order.
std::vector<StepFunction> full_multi_dts(const CoprimeModuli& moduli);
std::vector<StepFunction> full_reindexed_dts(const CoprimeModuli& moduli);

}  // namespace trigeq

namespace trigeq {

struct CrtCheckReport {
  std::int64_t cells = 0;
  /// Residue vectors whose image repeats or fails to invert.
  std::int64_t tau_failures = 0;
  std::int64_t tau_bar_failures = 0;
  /// (n_vec, u_vec) pairs checked against
  ///   sum_j n_j u_j (p/p_j) = tau(n_vec) tau_bar(u_vec)  (mod p).
  std::int64_t congruence_checks = 0;
  std::int64_t congruence_failures = 0;

  bool passed() const { return tau_failures == 0 && tau_bar_failures == 0 && congruence_failures == 0; }
};

/// Exhaustive bijectivity check of tau and tau_bar, and optionally of the
/// congruence over all p^2 pairs.
CrtCheckReport check_crt(const CoprimeModuli& moduli, bool congruence = true);

}  // namespace trigeq
