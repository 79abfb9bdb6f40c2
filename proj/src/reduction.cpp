#include "trigeq/reduction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace trigeq {

std::string to_string(ReductionMode mode) { return mode == ReductionMode::RC ? "rc" : "src"; }

ReductionMode parse_mode(const std::string& text) {
  if (text == "rc") return ReductionMode::RC;
  if (text == "src") return ReductionMode::SRC;
  throw std::invalid_argument("unknown reduction mode '" + text + "' (expected rc or src)");
}

// ---------------------------------------------------------------- inputs

MultiIndexSequence MultiIndexSequence::rc(std::size_t dim, std::vector<Frequency> indices) {
  if (dim == 0) throw std::domain_error("dimension must be at least 1");
  std::set<Frequency> seen;
  for (const auto& f : indices) {
    if (f.size() != dim) throw std::domain_error("multi-index of the wrong dimension");
    if (!seen.insert(f).second) throw std::domain_error("multi-indices must be pairwise distinct");
  }
  MultiIndexSequence out(ReductionMode::RC, dim);
  out.indices_ = std::move(indices);
  return out;
}

MultiIndexSequence MultiIndexSequence::src(std::size_t dim, std::vector<TrigPolynomial> polys) {
  if (dim == 0) throw std::domain_error("dimension must be at least 1");
  std::set<Frequency> seen;
  for (auto& p : polys) {
    if (p.dim() != dim) throw std::domain_error("polynomial of the wrong dimension");
    const auto spectrum = p.spectrum();
    for (const auto& f : spectrum.members()) {
      if (!seen.insert(f).second) throw std::domain_error("polynomial spectra must be pairwise disjoint");
    }
    const double norm = poly_l2_norm(p);
    if (norm > 1.0) p = p.scaled(1.0 / norm);
  }
  MultiIndexSequence out(ReductionMode::SRC, dim);
  out.polys_ = std::move(polys);
  return out;
}

TrigPolynomial MultiIndexSequence::entry(std::int64_t n) const {
  if (n < 1 || n > static_cast<std::int64_t>(size())) throw std::domain_error("input index out of range");
  const auto i = static_cast<std::size_t>(n - 1);
  return mode_ == ReductionMode::RC ? TrigPolynomial::monomial(indices_[i]) : polys_[i];
}

std::vector<Frequency> random_multi_indices(std::size_t dim, std::size_t count, std::int64_t radius, std::uint64_t seed) {
  if (dim == 0 || radius < 0) throw std::domain_error("random_multi_indices: bad dimension or radius");
  long double room = 1;
  for (std::size_t j = 0; j < dim; ++j) room *= static_cast<long double>(2 * radius + 1);
  if (static_cast<long double>(count) > room) throw std::domain_error("random_multi_indices: box too small");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(-radius, radius);
  std::set<Frequency> seen;
  std::vector<Frequency> out;
  out.reserve(count);
  while (out.size() < count) {
    Frequency f(dim);
    for (auto& c : f) c = pick(rng);
    if (seen.insert(f).second) out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------- moduli

namespace {

double sup_bound(const std::vector<std::int64_t>& extent, const std::vector<std::int64_t>& moduli) {
  double s = 0;
  for (std::size_t j = 0; j < extent.size(); ++j) {
    s += 2 * std::numbers::pi * static_cast<double>(extent[j]) / static_cast<double>(moduli[j]);
  }
  return s;
}

std::int64_t next_unused_prime(std::int64_t from, const std::set<std::int64_t>& used) {
  std::int64_t p = next_prime(from);
  while (used.count(p)) p = next_prime(p + 1);
  return p;
}

}  // namespace

CoprimeModuli choose_block_moduli(std::span<const Frequency> block, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw std::domain_error("choose_block_moduli: eps must be positive");
  if (block.empty()) throw std::domain_error("choose_block_moduli: empty block");
  const std::size_t d = block.front().size();
  if (d == 0) throw std::domain_error("choose_block_moduli: zero dimension");
  std::vector<std::int64_t> extent(d, 0);
  for (const auto& f : block) {
    if (f.size() != d) throw std::domain_error("choose_block_moduli: mixed dimensions");
    for (std::size_t j = 0; j < d; ++j) extent[j] = std::max(extent[j], f[j] < 0 ? -f[j] : f[j]);
  }
  const auto active = static_cast<double>(std::count_if(extent.begin(), extent.end(), [](std::int64_t m) { return m > 0; }));
  const double share = eps / std::max(active, 1.0);

  std::vector<std::int64_t> moduli(d, 0);
  std::set<std::int64_t> used;
  for (std::size_t j = 0; j < d; ++j) {
    if (extent[j] == 0) continue;
    const double need = std::ceil(2 * std::numbers::pi * static_cast<double>(extent[j]) / share);
    if (need > 4e18) throw std::overflow_error("choose_block_moduli: required modulus too large");
    moduli[j] = next_unused_prime(std::max(static_cast<std::int64_t>(need), extent[j] + 1), used);
    used.insert(moduli[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (extent[j] != 0) continue;
    moduli[j] = next_unused_prime(2, used);
    used.insert(moduli[j]);
  }
  // Rounding in the per-axis split can only leave the sum a few ulps high.
  while (sup_bound(extent, moduli) > eps) {
    std::size_t worst = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (static_cast<double>(extent[j]) / static_cast<double>(moduli[j]) >
          static_cast<double>(extent[worst]) / static_cast<double>(moduli[worst])) {
        worst = j;
      }
    }
    used.erase(moduli[worst]);
    moduli[worst] = next_unused_prime(moduli[worst] + 1, used);
    used.insert(moduli[worst]);
  }
  return CoprimeModuli(std::move(moduli));
}

namespace {

double log_sinc(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 1e-4) return -x2 / 6 - x2 * x2 / 180;
  return std::log(std::sin(x) / x);
}

}  // namespace

double discretization_error(const CoprimeModuli& moduli, const Frequency& nu) {
  if (nu.size() != moduli.dim()) throw std::domain_error("discretization_error: dimension mismatch");
  // <e(nu.x), t> = prod_j e^{i x_j} sinc(x_j), x_j = pi nu_j / p_j, so
  // ||e - t||^2 = 2 - 2 S cos(theta) = 2 (1 - S) + 4 S sin^2(theta / 2).
  double log_s = 0;
  double theta = 0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const std::int64_t mag = nu[j] < 0 ? -nu[j] : nu[j];
    if (mag >= moduli[j]) throw PreconditionError("modulus " + std::to_string(moduli[j]) + " does not exceed |nu_j|");
    const double x = std::numbers::pi * static_cast<double>(nu[j]) / static_cast<double>(moduli[j]);
    log_s += log_sinc(x);
    theta += x;
  }
  const double s = std::exp(log_s);
  const double h = std::sin(theta / 2);
  const double sq = -2 * std::expm1(log_s) + 4 * s * h * h;
  return std::sqrt(std::max(sq, 0.0));
}

// ---------------------------------------------------------------- blocks

Wide BlockPlan::raw_min() const {
  Wide lo = 0;
  bool first = true;
  for (const auto& m : members) {
    for (const auto& c : m.components) {
      const Wide v = c.residue + static_cast<Wide>(modulus()) * window.lo;
      if (first || v < lo) lo = v;
      first = false;
    }
  }
  return lo;
}

Wide BlockPlan::raw_max() const {
  Wide hi = 0;
  bool first = true;
  for (const auto& m : members) {
    for (const auto& c : m.components) {
      const Wide v = c.residue + static_cast<Wide>(modulus()) * window.hi;
      if (first || v > hi) hi = v;
      first = false;
    }
  }
  return hi;
}

std::vector<Progression> BlockPlan::progressions() const {
  std::vector<Progression> out;
  for (const auto& m : members) {
    for (const auto& c : m.components) out.push_back({shift + c.residue, modulus(), window.lo, window.hi});
  }
  return out;
}

namespace {

double max_truncation(const CoprimeModuli& moduli, const std::vector<std::int64_t>& residues, std::int64_t terms) {
  const TruncationWindow w = central_window(terms);
  double worst = 0;
  for (auto r : residues) worst = std::max(worst, dts_truncation_error_sq(moduli.product(), r, w));
  return std::sqrt(worst);
}

std::int64_t src_budget(const CoprimeModuli& moduli, const std::vector<std::int64_t>& residues, double target) {
  std::int64_t hi = 1;
  while (max_truncation(moduli, residues, hi) > target) {
    if (hi > (std::int64_t{1} << 40)) throw std::overflow_error("truncation budget exceeds 2^40 terms");
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // fails (or 0)
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (max_truncation(moduli, residues, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

BlockPlan build_block(const MultiIndexSequence& input, int k, std::int64_t n_max,
                      const std::optional<CoprimeModuli>& moduli) {
  if (k < 0 || k > 30) throw std::domain_error("block index out of range");
  n_max = std::min<std::int64_t>(n_max, static_cast<std::int64_t>(input.size()));
  const std::int64_t first = std::int64_t{1} << k;
  const std::int64_t last = std::min(2 * first - 1, n_max);
  if (first > last) throw std::domain_error("block " + std::to_string(k) + " has no members");

  BlockPlan b;
  b.k = k;
  std::vector<Frequency> sources;
  for (std::int64_t n = first; n <= last; ++n) {
    PlanMember m;
    m.n = n;
    if (input.mode() == ReductionMode::RC) {
      m.components.push_back({input.indices()[static_cast<std::size_t>(n - 1)], 0, 1.0, 0, 0});
    } else {
      for (const auto& [f, c] : input.polys()[static_cast<std::size_t>(n - 1)].terms()) {
        if (c != 0.0) m.components.push_back({f, 0, c, 0, 0});
      }
    }
    for (const auto& c : m.components) sources.push_back(c.source);
    b.members.push_back(std::move(m));
  }
  if (sources.empty()) sources.emplace_back(input.dim(), 0);

  if (moduli) {
    if (moduli->dim() != input.dim()) throw PreconditionError("moduli dimension differs from the input dimension");
    b.moduli = *moduli;
  } else {
    b.moduli = choose_block_moduli(sources, block_disc_target(k, input.mode(), b.members));
  }
  finish_block(b, input.mode());
  return b;
}

double block_disc_target(int k, ReductionMode mode, const std::vector<PlanMember>& members) {
  double l1_max = 0;
  for (const auto& m : members) {
    double l1 = 0;
    for (const auto& c : m.components) l1 += std::abs(c.weight);
    l1_max = std::max(l1_max, l1);
  }
  double target = std::ldexp(1.0, -k - 1);
  if (mode == ReductionMode::SRC && l1_max > 1) target /= l1_max;
  return target;
}

void finish_block(BlockPlan& b, ReductionMode mode) {
  const int k = b.k;
  const std::size_t dim = b.moduli.dim();
  b.disc_target = block_disc_target(k, mode, b.members);
  std::vector<std::int64_t> extent(dim, 0);
  for (const auto& m : b.members) {
    for (const auto& c : m.components) {
      if (c.source.size() != dim) throw PreconditionError("moduli dimension differs from the input dimension");
      for (std::size_t j = 0; j < dim; ++j) extent[j] = std::max(extent[j], c.source[j] < 0 ? -c.source[j] : c.source[j]);
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (b.moduli[j] <= extent[j]) throw PreconditionError("moduli too small for block " + std::to_string(k));
  }
  if (sup_bound(extent, b.moduli.moduli()) > b.disc_target) {
    throw PreconditionError("moduli too small for the discretization target of block " + std::to_string(k));
  }
  const std::int64_t p = b.modulus();

  std::vector<std::int64_t> residues;
  std::vector<std::int64_t> reduced(dim);
  for (auto& m : b.members) {
    for (auto& c : m.components) {
      for (std::size_t j = 0; j < reduced.size(); ++j) reduced[j] = mod64(c.source[j], b.moduli[j]);
      c.residue = crt_tau(b.moduli, reduced);
      residues.push_back(c.residue);
    }
  }
  {
    std::vector<std::int64_t> sorted = residues;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw PreconditionError("block " + std::to_string(k) + ": moduli too small, two inputs share a CRT residue");
    }
  }

  const std::int64_t terms = mode == ReductionMode::RC ? std::int64_t{1} << (2 * k)
                                                       : src_budget(b.moduli, residues, std::ldexp(1.0, -k - 1));
  b.window = central_window(terms);

  b.eps = b.eps_disc = b.eps_trunc = 0;
  for (auto& m : b.members) {
    double trunc_sq = 0;
    m.norm_sq = 0;
    m.disc_error = 0;
    for (auto& c : m.components) {
      c.disc_error = discretization_error(b.moduli, c.source);
      const double t2 = dts_truncation_error_sq(p, c.residue, b.window);
      c.trunc_error = std::sqrt(t2);
      const double w2 = std::norm(c.weight);
      m.disc_error += std::abs(c.weight) * c.disc_error;
      trunc_sq += w2 * t2;
      m.norm_sq += w2 * (1 - t2);
    }
    m.trunc_error = std::sqrt(trunc_sq);
    b.eps = std::max(b.eps, m.error());
    b.eps_disc = std::max(b.eps_disc, m.disc_error);
    b.eps_trunc = std::max(b.eps_trunc, m.trunc_error);
  }
}

TrigPolynomial member_polynomial(const BlockPlan& block, std::size_t member, bool shifted) {
  const auto& m = block.members.at(member);
  const std::int64_t p = block.modulus();
  TrigPolynomial out(1);
  for (const auto& c : m.components) {
    const ProgressionCoefficients coeffs(p, c.residue);
    for (std::int64_t j = block.window.lo; j <= block.window.hi; ++j) {
      const Wide raw = c.residue + static_cast<Wide>(p) * j;
      const std::complex<double> b = c.weight * coeffs.at(raw);
      if (b != 0.0) out.add(narrow_int64(raw + (shifted ? block.shift : 0)), b);
    }
  }
  return out;
}

std::vector<TrigPolynomial> build_block_polys(const BlockPlan& block, bool shifted) {
  std::vector<TrigPolynomial> out;
  out.reserve(block.members.size());
  for (std::size_t i = 0; i < block.members.size(); ++i) out.push_back(member_polynomial(block, i, shifted));
  return out;
}

namespace {

// True if some progression of `a` meets some progression of `b`; counts
// the individual tests in `tests`.
bool blocks_meet(const BlockPlan& a, const std::vector<Progression>& pa, const BlockPlan& b,
                 const std::vector<Progression>& pb, std::size_t& tests, std::size_t* hits = nullptr) {
  const Wide a_lo = a.shift + a.raw_min(), a_hi = a.shift + a.raw_max();
  const Wide b_lo = b.shift + b.raw_min(), b_hi = b.shift + b.raw_max();
  if (a_hi < b_lo || b_hi < a_lo) return false;
  Wide x = 0, y = 0;
  const Wide g = extended_gcd(a.modulus(), b.modulus(), x, y);
  bool any = false;
  for (const auto& u : pa) {
    for (const auto& v : pb) {
      ++tests;
      if (progressions_meet(u, v, g, x)) {
        any = true;
        if (!hits) return true;
        ++*hits;
      }
    }
  }
  return any;
}

}  // namespace

std::vector<Wide> assign_shifts(std::vector<BlockPlan>& blocks) {
  std::vector<Wide> shifts;
  std::vector<std::vector<Progression>> placed;
  Wide running_max = 0;
  std::size_t tests = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& b = blocks[i];
    b.shift = 0;
    auto mine = b.progressions();
    bool clash = false;
    for (std::size_t q = 0; q < i && !clash; ++q) clash = blocks_meet(b, mine, blocks[q], placed[q], tests);
    if (clash) b.shift = running_max - b.raw_min() + 1;
    if (b.shift != 0) mine = b.progressions();
    running_max = i == 0 ? b.shift + b.raw_max() : std::max(running_max, b.shift + b.raw_max());
    placed.push_back(std::move(mine));
    shifts.push_back(b.shift);
  }
  return shifts;
}

// ---------------------------------------------------------------- plan

ReductionPlan::ReductionPlan(ReductionMode mode, std::size_t dim, std::int64_t n_max, std::vector<BlockPlan> blocks)
    : mode_(mode), dim_(dim), n_max_(n_max), blocks_(std::move(blocks)) {
  if (n_max_ < 1) throw std::domain_error("plan needs N >= 1");
  offsets_.reserve(static_cast<std::size_t>(n_max_) + 1);
  offsets_.push_back(0);
  std::int64_t expect = 1;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    if (b.k != static_cast<int>(k)) throw std::domain_error("plan blocks must be numbered 0, 1, 2, ...");
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      if (b.members[i].n != expect) throw std::domain_error("plan members must cover 1..N in order");
      offsets_.push_back(checked_add(offsets_.back(), b.slot_size(i)));
      ++expect;
    }
  }
  if (expect != n_max_ + 1) throw std::domain_error("plan members must cover 1..N");
}

const BlockPlan& ReductionPlan::block(int k) const {
  if (k < 0 || k >= static_cast<int>(blocks_.size())) throw std::domain_error("no block " + std::to_string(k));
  return blocks_[static_cast<std::size_t>(k)];
}

const BlockPlan& ReductionPlan::block_of(std::int64_t n) const {
  if (n < 1 || n > n_max_) throw std::domain_error("slot " + std::to_string(n) + " out of range");
  return blocks_[static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(n)) - 1)];
}

const PlanMember& ReductionPlan::member(std::int64_t n) const {
  const auto& b = block_of(n);
  return b.members[static_cast<std::size_t>(n - (std::int64_t{1} << b.k))];
}

void ReductionPlan::for_each_term(std::int64_t n, const std::function<void(std::int64_t, const PlanTerm&)>& visit) const {
  const auto& b = block_of(n);
  const auto& m = member(n);
  const std::int64_t p = b.modulus();
  std::int64_t s = offset(n);
  for (const auto& c : m.components) {
    const ProgressionCoefficients coeffs(p, c.residue);
    for (std::int64_t j = b.window.lo; j <= b.window.hi; ++j) {
      const Wide raw = c.residue + static_cast<Wide>(p) * j;
      visit(++s, PlanTerm{b.shift + raw, c.weight * coeffs.at(raw)});
    }
  }
}

PlanTerm ReductionPlan::term(std::int64_t s) const {
  if (s < 1 || s > total_terms()) throw std::domain_error("term index out of range");
  const auto it = std::lower_bound(offsets_.begin(), offsets_.end(), s);
  const auto n = static_cast<std::int64_t>(it - offsets_.begin());  // s_n < s <= s_{n+1}
  const auto& b = block_of(n);
  const auto& m = member(n);
  const std::int64_t pos = s - offset(n) - 1;
  const auto& c = m.components[static_cast<std::size_t>(pos / b.window.size())];
  const std::int64_t j = b.window.lo + pos % b.window.size();
  const Wide raw = c.residue + static_cast<Wide>(b.modulus()) * j;
  return {b.shift + raw, c.weight * ProgressionCoefficients(b.modulus(), c.residue).at(raw)};
}

TrigPolynomial ReductionPlan::slot_polynomial(std::int64_t n) const {
  const auto& b = block_of(n);
  return member_polynomial(b, static_cast<std::size_t>(n - (std::int64_t{1} << b.k)), true);
}

ReductionPlan build_reduction(const MultiIndexSequence& input, std::int64_t n_max) {
  if (n_max < 1) throw std::domain_error("build_reduction: N must be at least 1");
  if (n_max > static_cast<std::int64_t>(input.size())) {
    throw std::domain_error("build_reduction: only " + std::to_string(input.size()) + " inputs for N = " +
                            std::to_string(n_max));
  }
  std::vector<BlockPlan> blocks;
  for (int k = 0; (std::int64_t{1} << k) <= n_max; ++k) blocks.push_back(build_block(input, k, n_max));
  assign_shifts(blocks);
  return {input.mode(), input.dim(), n_max, std::move(blocks)};
}

// ---------------------------------------------------------------- checks

PlanStructureReport check_plan_structure(const ReductionPlan& plan, std::int64_t exhaustive_limit) {
  PlanStructureReport r;
  r.slots = plan.n_max();
  r.total_terms = plan.total_terms();
  auto note = [&r](std::string msg) {
    if (r.messages.size() < 16) r.messages.push_back(std::move(msg));
  };

  if (plan.offset(1) != 0) {
    ++r.offset_violations;
    note("s_1 != 0");
  }
  for (std::int64_t n = 1; n <= plan.n_max(); ++n) {
    const auto& b = plan.block_of(n);
    const std::int64_t step = plan.offset(n + 1) - plan.offset(n);
    const std::int64_t want = plan.mode() == ReductionMode::RC ? std::int64_t{1} << (2 * b.k)
                                                               : b.slot_size(static_cast<std::size_t>(n - (std::int64_t{1} << b.k)));
    if (step != want) {
      ++r.offset_violations;
      note("s_{n+1} - s_n != 4^k at n = " + std::to_string(n));
    }
  }
  if (plan.mode() == ReductionMode::RC) {
    for (std::int64_t n = 1; n <= plan.n_max() + 1; ++n) {
      const Wide n2 = static_cast<Wide>(n) * n;
      if (static_cast<Wide>(plan.offset(n)) > n2 * n2) {
        ++r.growth_violations;
        note("s_n > n^4 at n = " + std::to_string(n));
      }
    }
  }

  std::int64_t summed_terms = 0;
  for (const auto& b : plan.blocks()) summed_terms += static_cast<std::int64_t>(b.members.size()) * b.slot_size(0);
  r.norms_summed = summed_terms <= (std::int64_t{1} << 22);
  for (std::int64_t n = 1; n <= plan.n_max(); ++n) {
    double sq = 0;
    if (r.norms_summed) {
      long double acc = 0;
      plan.for_each_term(n, [&acc](std::int64_t, const PlanTerm& t) { acc += std::norm(t.coeff); });
      sq = static_cast<double>(acc);
    } else {
      sq = plan.member(n).norm_sq;
    }
    r.worst_slot_norm_sq = std::max(r.worst_slot_norm_sq, sq);
    if (sq > 1.0 + 1e-12) {
      ++r.norm_violations;
      note("slot norm above 1 at n = " + std::to_string(n));
    }
  }

  for (const auto& b : plan.blocks()) {
    const double scaled = std::ldexp(b.eps, b.k);
    r.worst_scaled_error = std::max(r.worst_scaled_error, scaled);
    if (scaled > kBlockErrorConstant) {
      ++r.error_violations;
      note("eps_k above K 2^-k at k = " + std::to_string(b.k));
    }
    std::vector<std::int64_t> res;
    for (const auto& m : b.members) {
      for (const auto& c : m.components) {
        res.push_back(c.residue);
        if (c.residue < 0 || c.residue >= b.modulus()) ++r.residue_collisions;
      }
    }
    std::sort(res.begin(), res.end());
    for (std::size_t i = 1; i < res.size(); ++i) {
      if (res[i] == res[i - 1]) {
        ++r.residue_collisions;
        note("repeated residue in block " + std::to_string(b.k));
      }
    }
  }

  std::vector<std::vector<Progression>> progs;
  for (const auto& b : plan.blocks()) progs.push_back(b.progressions());
  for (std::size_t a = 0; a < progs.size(); ++a) {
    for (std::size_t c = a + 1; c < progs.size(); ++c) {
      std::size_t hits = 0;
      blocks_meet(plan.blocks()[a], progs[a], plan.blocks()[c], progs[c], r.progression_tests, &hits);
      if (hits) {
        r.overlap_violations += hits;
        note("blocks " + std::to_string(a) + " and " + std::to_string(c) + " share frequencies");
      }
    }
  }

  if (r.total_terms <= exhaustive_limit) {
    r.exhaustive = true;
    std::vector<Wide> all;
    all.reserve(static_cast<std::size_t>(r.total_terms));
    for (std::int64_t n = 1; n <= plan.n_max(); ++n) {
      plan.for_each_term(n, [&all](std::int64_t, const PlanTerm& t) { all.push_back(t.frequency); });
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i) {
      if (all[i] == all[i - 1]) {
        ++r.overlap_violations;
        note("frequency " + to_string(all[i]) + " repeated");
      }
    }
  }
  return r;
}

std::vector<std::complex<double>> map_coefficients(const ReductionPlan& plan, std::span<const std::complex<double>> a) {
  if (static_cast<std::int64_t>(a.size()) > plan.n_max()) {
    throw std::domain_error("map_coefficients: " + std::to_string(a.size()) + " coefficients for " +
                            std::to_string(plan.n_max()) + " slots");
  }
  std::vector<std::complex<double>> c(static_cast<std::size_t>(plan.total_terms()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    plan.for_each_term(static_cast<std::int64_t>(i + 1), [&](std::int64_t s, const PlanTerm& t) {
      c[static_cast<std::size_t>(s - 1)] = a[i] * t.coeff;
    });
  }
  return c;
}

WeightTransferReport verify_weight_transfer(const ReductionPlan& plan, std::span<const std::complex<double>> a,
                                            const WeightSequence& w) {
  if (static_cast<std::int64_t>(a.size()) > plan.n_max()) throw std::domain_error("verify_weight_transfer: too many coefficients");
  require_admissible(w, std::max<std::int64_t>(plan.n_max(), 2));
  double prev = 0;
  for (auto s : plan.offsets()) {
    if (s == 0) continue;
    const double v = w(s);
    if (v < prev) throw std::domain_error("weight " + w.name() + " decreases along the offsets");
    prev = v;
  }
  WeightTransferReport r;
  for (std::int64_t n = 1; n <= plan.n_max(); ++n) {
    const double ratio = w(plan.offset(n + 1)) / w(n);
    if (ratio > r.c_star) {
      r.c_star = ratio;
      r.c_star_argmax = n;
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double a2 = std::norm(a[i]);
    if (a2 == 0) continue;
    const auto n = static_cast<std::int64_t>(i + 1);
    r.rhs += a2 * w(n);
    plan.for_each_term(n, [&](std::int64_t s, const PlanTerm& t) { r.lhs += a2 * std::norm(t.coeff) * w(s); });
  }
  r.holds = r.lhs <= r.c_star * r.rhs * (1 + 1e-12);
  return r;
}

BlockCertificate block_equivalence_certificate(const ReductionPlan& plan, int k, std::int64_t exhaustive_cells) {
  const auto& b = plan.block(k);
  BlockCertificate cert;
  cert.k = k;
  cert.moduli = b.moduli.moduli();
  const std::int64_t p = b.modulus();
  cert.correspondence_exhaustive = p <= exhaustive_cells;
  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(k));
  const CellPartition cells(b.moduli.moduli());
  std::vector<std::int64_t> reduced(b.moduli.dim());

  for (const auto& m : b.members) {
    MemberCertificate mc;
    mc.n = m.n;
    mc.disc_error = m.disc_error;
    mc.trunc_error = m.trunc_error;
    mc.total = m.error();
    for (const auto& c : m.components) {
      mc.sources.push_back(c.source);
      mc.residues.push_back(c.residue);
      for (std::size_t j = 0; j < reduced.size(); ++j) reduced[j] = mod64(c.source[j], b.moduli[j]);
      if (cert.correspondence_exhaustive) {
        if (dts_correspondence(b.moduli, reduced) != c.residue) throw ConsistencyError("certificate: residue mismatch");
        cert.cells_checked += p;
        continue;
      }
      if (crt_tau(b.moduli, reduced) != c.residue) throw ConsistencyError("certificate: residue mismatch");
      std::uniform_int_distribution<std::int64_t> pick(0, p - 1);
      for (int t = 0; t < 256; ++t) {
        const auto u = cells.cell_of(pick(rng));
        Wide lhs = 0;
        for (std::size_t j = 0; j < u.size(); ++j) lhs += static_cast<Wide>(mul_mod(reduced[j], u[j], b.moduli[j])) * (p / b.moduli[j]);
        if (mod_wide(lhs, p) != mul_mod(c.residue, crt_tau_bar(b.moduli, u), p)) {
          throw ConsistencyError("certificate: CRT congruence fails in block " + std::to_string(k));
        }
        ++cert.cells_checked;
      }
    }
    cert.members.push_back(std::move(mc));
  }
  cert.eps = b.eps;
  cert.eps_disc = b.eps_disc;
  cert.eps_trunc = b.eps_trunc;
  cert.bound = std::ldexp(kBlockErrorConstant, -k);
  cert.passed = cert.eps <= cert.bound;
  return cert;
}

}  // namespace trigeq
