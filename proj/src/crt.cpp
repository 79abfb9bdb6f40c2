#include "trigeq/crt.hpp"

#include <stdexcept>
#include <string>

#include "trigeq/arith.hpp"
#include "trigeq/dts.hpp"

namespace trigeq {

CoprimeModuli::CoprimeModuli(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw std::invalid_argument("CoprimeModuli: at least one modulus required");
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    if (moduli_[i] < 2) throw std::invalid_argument("CoprimeModuli: moduli must be >= 2");
    for (std::size_t j = 0; j < i; ++j) {
      if (gcd64(moduli_[i], moduli_[j]) != 1) {
        throw std::invalid_argument("CoprimeModuli: moduli " + std::to_string(moduli_[j]) + " and " +
                                    std::to_string(moduli_[i]) + " are not coprime");
      }
    }
    product_ = checked_mul(product_, moduli_[i]);
  }
  Wide q = 0;
  basis_.reserve(moduli_.size());
  for (auto pj : moduli_) {
    const std::int64_t cofactor = product_ / pj;
    q += cofactor;
    basis_.push_back(mul_mod(cofactor, inverse_mod(cofactor % pj, pj), product_));
  }
  twist_ = static_cast<std::int64_t>(mod_wide(q, product_));
}

namespace {

void check_residues(const CoprimeModuli& moduli, std::span<const std::int64_t> residues) {
  if (residues.size() != moduli.dim()) throw std::domain_error("residue vector has the wrong dimension");
  for (std::size_t j = 0; j < residues.size(); ++j) {
    if (residues[j] < 0 || residues[j] >= moduli[j]) {
      throw std::domain_error("residue " + std::to_string(residues[j]) + " outside [0, " + std::to_string(moduli[j]) +
                              ")");
    }
  }
}

}  // namespace

std::int64_t crt_tau(const CoprimeModuli& moduli, std::span<const std::int64_t> residues) {
  check_residues(moduli, residues);
  const std::int64_t p = moduli.product();
  Wide l = 0;
  for (std::size_t j = 0; j < residues.size(); ++j) l = mod_wide(l + mod_wide(static_cast<Wide>(residues[j]) * moduli.basis_[j], p), p);
  return static_cast<std::int64_t>(l);
}

std::vector<std::int64_t> crt_tau_inverse(const CoprimeModuli& moduli, std::int64_t l) {
  if (l < 0 || l >= moduli.product()) throw std::domain_error("crt_tau_inverse: index outside [0, p)");
  std::vector<std::int64_t> out(moduli.dim());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = l % moduli[j];
  return out;
}

std::int64_t crt_tau_bar(const CoprimeModuli& moduli, std::span<const std::int64_t> residues) {
  return mul_mod(crt_tau(moduli, residues), moduli.twist(), moduli.product());
}

std::vector<std::int64_t> crt_tau_bar_inverse(const CoprimeModuli& moduli, std::int64_t u) {
  if (u < 0 || u >= moduli.product()) throw std::domain_error("crt_tau_bar_inverse: index outside [0, p)");
  const std::int64_t p = moduli.product();
  return crt_tau_inverse(moduli, mul_mod(u, inverse_mod(moduli.twist(), p), p));
}

MPCellMap build_theta(const CoprimeModuli& moduli) {
  CellPartition source(moduli.moduli());
  CellPartition target({moduli.product()});
  std::vector<std::int64_t> image(static_cast<std::size_t>(moduli.product()));
  for (std::int64_t idx = 0; idx < source.cell_count(); ++idx) {
    image[static_cast<std::size_t>(idx)] = crt_tau_bar(moduli, source.cell_of(idx));
  }
  return {std::move(source), std::move(target), std::move(image)};
}

StepFunction dts_step_function(const std::vector<std::int64_t>& axis_orders, std::span<const std::int64_t> n_vec) {
  const DiscreteTrigSystem sys(axis_orders);
  CellPartition part(axis_orders);
  std::vector<CellValue> values;
  values.reserve(static_cast<std::size_t>(part.cell_count()));
  for (std::int64_t idx = 0; idx < part.cell_count(); ++idx) values.emplace_back(sys.phase_at_cell(n_vec, part.cell_of(idx)));
  return {std::move(part), std::move(values)};
}

StepFunction dts_step_function(std::int64_t l, std::int64_t n) {
  const std::int64_t idx[1] = {n};
  return dts_step_function(std::vector<std::int64_t>{l}, idx);
}

std::int64_t dts_correspondence(const CoprimeModuli& moduli, std::span<const std::int64_t> n_vec) {
  const std::int64_t n = crt_tau(moduli, n_vec);
  const std::int64_t p = moduli.product();
  const CellPartition source(moduli.moduli());
  for (std::int64_t idx = 0; idx < p; ++idx) {
    const auto u = source.cell_of(idx);
    Wide lhs = 0;
    for (std::size_t j = 0; j < u.size(); ++j) lhs += static_cast<Wide>(mul_mod(n_vec[j], u[j], moduli[j])) * (p / moduli[j]);
    if (mod_wide(lhs, p) != mul_mod(n, crt_tau_bar(moduli, u), p)) {
      throw ConsistencyError("dts_correspondence: congruence fails at cell " + std::to_string(idx));
    }
  }
  const StepFunction image = mp_apply(build_theta(moduli), dts_step_function(moduli.moduli(), n_vec));
  if (!(image == dts_step_function(p, n))) throw ConsistencyError("dts_correspondence: Theta image differs from t_tau(n)");
  return n;
}

std::vector<StepFunction> full_multi_dts(const CoprimeModuli& moduli) {
  const CellPartition index_box(moduli.moduli());
  std::vector<StepFunction> out;
  out.reserve(static_cast<std::size_t>(moduli.product()));
  for (std::int64_t i = 0; i < moduli.product(); ++i) out.push_back(dts_step_function(moduli.moduli(), index_box.cell_of(i)));
  return out;
}

std::vector<StepFunction> full_reindexed_dts(const CoprimeModuli& moduli) {
  const CellPartition index_box(moduli.moduli());
  std::vector<StepFunction> out;
  out.reserve(static_cast<std::size_t>(moduli.product()));
  for (std::int64_t i = 0; i < moduli.product(); ++i) out.push_back(dts_step_function(moduli.product(), crt_tau(moduli, index_box.cell_of(i))));
  return out;
}

}  // namespace trigeq

namespace trigeq {

CrtCheckReport check_crt(const CoprimeModuli& moduli, bool congruence) {
  const CellPartition cells(moduli.moduli());
  const std::int64_t p = moduli.product();
  CrtCheckReport r;
  r.cells = p;
  std::vector<char> seen_tau(static_cast<std::size_t>(p), 0), seen_bar(static_cast<std::size_t>(p), 0);
  std::vector<std::int64_t> tau(static_cast<std::size_t>(p)), bar(static_cast<std::size_t>(p));
  for (std::int64_t c = 0; c < p; ++c) {
    const auto u = cells.cell_of(c);
    const auto t = crt_tau(moduli, u);
    const auto b = crt_tau_bar(moduli, u);
    tau[static_cast<std::size_t>(c)] = t;
    bar[static_cast<std::size_t>(c)] = b;
    if (t < 0 || t >= p || seen_tau[static_cast<std::size_t>(t)]++ || crt_tau_inverse(moduli, t) != u) ++r.tau_failures;
    if (b < 0 || b >= p || seen_bar[static_cast<std::size_t>(b)]++ || crt_tau_bar_inverse(moduli, b) != u) {
      ++r.tau_bar_failures;
    }
  }
  if (!congruence) return r;
  std::vector<std::int64_t> cofactor(moduli.dim());
  for (std::size_t j = 0; j < cofactor.size(); ++j) cofactor[j] = p / moduli[j];
  for (std::int64_t a = 0; a < p; ++a) {
    const auto n = cells.cell_of(a);
    for (std::int64_t c = 0; c < p; ++c) {
      const auto u = cells.cell_of(c);
      std::int64_t lhs = 0;
      for (std::size_t j = 0; j < n.size(); ++j) lhs = (lhs + mul_mod(n[j] * u[j], cofactor[j], p)) % p;
      const auto rhs = mul_mod(tau[static_cast<std::size_t>(a)], bar[static_cast<std::size_t>(c)], p);
      ++r.congruence_checks;
      if (lhs != rhs) ++r.congruence_failures;
    }
  }
  return r;
}

}  // namespace trigeq
