#include "trigeq/lab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "trigeq/arith.hpp"

namespace trigeq {

Grid::Grid(std::vector<std::int64_t> resolution) : res_(std::move(resolution)) {
  if (res_.empty()) throw std::domain_error("Grid: dimension must be at least 1");
  for (auto g : res_) {
    if (g < 1) throw std::domain_error("Grid: resolution must be at least 1");
    count_ = checked_mul(count_, g);
  }
}

std::vector<std::int64_t> Grid::point(std::int64_t index) const {
  if (index < 0 || index >= count_) throw std::out_of_range("Grid: point index out of range");
  std::vector<std::int64_t> out(res_.size());
  for (std::size_t j = res_.size(); j-- > 0;) {
    out[j] = index % res_[j];
    index /= res_[j];
  }
  return out;
}

std::vector<double> Grid::coordinates(std::int64_t index) const {
  const auto p = point(index);
  std::vector<double> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) out[j] = static_cast<double>(p[j]) / static_cast<double>(res_[j]);
  return out;
}

GridSignal::GridSignal(Grid g, std::vector<std::complex<double>> v) : grid(std::move(g)), values(std::move(v)) {
  if (static_cast<std::int64_t>(values.size()) != grid.point_count()) {
    throw std::domain_error("GridSignal: value count differs from the grid size");
  }
}

GridSignal SystemEvaluator::sample(std::int64_t n, const Grid& grid) const {
  std::vector<std::complex<double>> v(static_cast<std::size_t>(grid.point_count()));
  sample(n, grid, v);
  return {grid, std::move(v)};
}

void SystemEvaluator::check_index(std::int64_t n) const {
  if (n < 1 || n > size()) {
    throw std::domain_error(name() + " system: function " + std::to_string(n) + " not defined (size " +
                            std::to_string(size()) + ")");
  }
}

namespace {

std::vector<std::complex<double>> root_table(std::int64_t q) {
  std::vector<std::complex<double>> t(static_cast<std::size_t>(q));
  for (std::int64_t i = 0; i < q; ++i) t[static_cast<std::size_t>(i)] = Phase(i, q).value();
  return t;
}

void check_grid(const Grid& grid, std::size_t dim, std::span<std::complex<double>> out) {
  if (grid.dim() != dim) throw std::domain_error("grid dimension differs from the system dimension");
  if (static_cast<std::int64_t>(out.size()) != grid.point_count()) throw std::domain_error("output buffer has the wrong size");
}

// Visits grid points in row-major order with their integer coordinates.
template <class F>
void for_each_point(const Grid& grid, F&& visit) {
  std::vector<std::int64_t> idx(grid.dim(), 0);
  const auto& res = grid.resolution();
  for (std::int64_t p = 0; p < grid.point_count(); ++p) {
    visit(p, idx);
    for (std::size_t j = idx.size(); j-- > 0;) {
      if (++idx[j] < res[j]) break;
      idx[j] = 0;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- trig

TrigSystem::TrigSystem(std::size_t dim, std::vector<Frequency> frequencies) : dim_(dim), freqs_(std::move(frequencies)) {
  if (dim_ == 0) throw std::domain_error("TrigSystem: dimension must be at least 1");
  for (const auto& f : freqs_) {
    if (f.size() != dim_) throw std::domain_error("TrigSystem: frequency of the wrong dimension");
  }
}

void TrigSystem::check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const {
  if (grid.dim() != dim_) throw std::domain_error("grid dimension differs from the system dimension");
  for (std::size_t j = 0; j < dim_; ++j) {
    std::int64_t extent = 0;
    for (std::int64_t n = first; n <= last; ++n) {
      check_index(n);
      const auto v = freqs_[static_cast<std::size_t>(n - 1)][j];
      extent = std::max(extent, v < 0 ? -v : v);
    }
    if (grid.resolution()[j] < 4 * extent) {
      throw std::domain_error("grid too coarse for the trig system: axis " + std::to_string(j) + " needs resolution >= " +
                              std::to_string(4 * extent));
    }
  }
}

void TrigSystem::sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const {
  check_index(n);
  check_grid(grid, dim_, out);
  std::int64_t l = 1;
  for (auto g : grid.resolution()) l = lcm64(l, g);
  const auto table = root_table(l);
  const auto& nu = freqs_[static_cast<std::size_t>(n - 1)];
  std::vector<std::int64_t> step(dim_);
  for (std::size_t j = 0; j < dim_; ++j) step[j] = mul_mod(mod64(nu[j], l), l / grid.resolution()[j], l);
  for_each_point(grid, [&](std::int64_t p, const std::vector<std::int64_t>& idx) {
    std::int64_t num = 0;
    for (std::size_t j = 0; j < dim_; ++j) num = (num + mul_mod(step[j], idx[j], l)) % l;
    out[static_cast<std::size_t>(p)] = table[static_cast<std::size_t>(num)];
  });
}

TrigSystem TrigSystem::modulated(const Frequency& shift) const {
  if (shift.size() != dim_) throw std::domain_error("TrigSystem: shift of the wrong dimension");
  auto out = freqs_;
  for (auto& f : out) {
    for (std::size_t j = 0; j < dim_; ++j) f[j] = checked_add(f[j], shift[j]);
  }
  return {dim_, std::move(out)};
}

// ---------------------------------------------------------------- dts

DtsSystem::DtsSystem(std::vector<std::int64_t> axis_orders, std::vector<Frequency> indices)
    : sys_(std::move(axis_orders)), indices_(std::move(indices)) {
  for (const auto& f : indices_) {
    if (f.size() != sys_.dim()) throw std::domain_error("DtsSystem: index of the wrong dimension");
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f[j] < 0 || f[j] >= sys_.axis_orders()[j]) throw std::domain_error("DtsSystem: index outside [0, p_j)");
    }
  }
}

void DtsSystem::check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const {
  check_index(first);
  check_index(last);
  if (grid.dim() != sys_.dim()) throw std::domain_error("grid dimension differs from the system dimension");
  for (std::size_t j = 0; j < sys_.dim(); ++j) {
    const auto p = sys_.axis_orders()[j];
    if (grid.resolution()[j] % p != 0) {
      throw std::domain_error("grid not cell-aligned for the DTS: axis " + std::to_string(j) +
                              " needs a resolution that is a multiple of " + std::to_string(p));
    }
  }
}

void DtsSystem::sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const {
  check_index(n);
  check_grid(grid, sys_.dim(), out);
  const std::int64_t p = sys_.order();
  const auto table = root_table(p);
  const auto& idx_n = indices_[static_cast<std::size_t>(n - 1)];
  std::vector<std::int64_t> weight(sys_.dim());
  for (std::size_t j = 0; j < weight.size(); ++j) {
    weight[j] = mul_mod(idx_n[j], p / sys_.axis_orders()[j], p);
  }
  for_each_point(grid, [&](std::int64_t pt, const std::vector<std::int64_t>& idx) {
    std::int64_t num = 0;
    for (std::size_t j = 0; j < weight.size(); ++j) {
      // Cell index floor(i_j p_j / G_j); exact for any resolution.
      const auto cell = static_cast<std::int64_t>(static_cast<Wide>(idx[j]) * sys_.axis_orders()[j] / grid.resolution()[j]);
      num = (num + mul_mod(weight[j], cell, p)) % p;
    }
    out[static_cast<std::size_t>(pt)] = table[static_cast<std::size_t>(num)];
  });
}

DtsSystem DtsSystem::reindexed() const {
  const CoprimeModuli moduli(sys_.axis_orders());
  std::vector<Frequency> out;
  out.reserve(indices_.size());
  for (const auto& f : indices_) out.push_back({crt_tau(moduli, f)});
  return {{moduli.product()}, std::move(out)};
}

// ---------------------------------------------------------------- plan

void PlanSystem::check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const {
  check_index(first);
  check_index(last);
  if (grid.dim() != 1) throw std::domain_error("plan systems are one-dimensional");
}

std::int64_t PlanSystem::resolving_grid(int k) const {
  const auto& b = plan_->block(k);
  std::int64_t g = 4 * (std::max(-b.window.lo, b.window.hi) + 1);
  while (gcd64(g, b.modulus()) != 1) ++g;
  return g;
}

void PlanSystem::sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const {
  check_index(n);
  check_grid(grid, 1, out);
  const std::int64_t g = grid.resolution()[0];
  const auto table = root_table(g);
  std::fill(out.begin(), out.end(), std::complex<double>{});
  plan_->for_each_term(n, [&](std::int64_t, const PlanTerm& t) {
    if (t.coeff == 0.0) return;
    const auto step = static_cast<std::int64_t>(mod_wide(t.frequency, g));
    std::int64_t at = 0;
    for (std::int64_t i = 0; i < g; ++i) {
      out[static_cast<std::size_t>(i)] += t.coeff * table[static_cast<std::size_t>(at)];
      at += step;
      if (at >= g) at -= g;
    }
  });
}

// ---------------------------------------------------------------- maxima

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::domain_error("quantile of empty data");
  if (q < 0 || q > 1) throw std::domain_error("quantile level outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BlockMaxima block_maximum(const SystemEvaluator& sys, std::span<const std::complex<double>> a, int k, const Grid& grid) {
  if (k < 0 || k > 40) throw std::domain_error("block index out of range");
  const std::int64_t first = std::int64_t{1} << k;
  const std::int64_t last = 2 * first - 1;
  if (static_cast<std::int64_t>(a.size()) < last) {
    throw std::domain_error("block " + std::to_string(k) + " needs " + std::to_string(last) + " coefficients, got " +
                            std::to_string(a.size()));
  }
  if (sys.size() < last) throw std::domain_error("system has too few functions for block " + std::to_string(k));
  if (grid.dim() != sys.dim()) throw std::domain_error("grid dimension differs from the system dimension");
  for (auto r : grid.resolution()) {
    if (r < 2) throw std::domain_error("grid resolution must be at least 2");
  }
  sys.check_resolution(grid, first, last);

  const auto points = static_cast<std::size_t>(grid.point_count());
  std::vector<std::complex<double>> sum(points), f(points);
  BlockMaxima out;
  out.k = k;
  out.values.assign(points, 0.0);
  for (std::int64_t n = first; n <= last; ++n) {
    const auto an = a[static_cast<std::size_t>(n - 1)];
    sys.sample(n, grid, f);
    for (std::size_t i = 0; i < points; ++i) {
      sum[i] += an * f[i];
      out.values[i] = std::max(out.values[i], std::abs(sum[i]));
    }
  }
  std::vector<double> sorted = out.values;
  std::sort(sorted.begin(), sorted.end());
  out.sup = sorted.back();
  double total = 0;
  for (double v : out.values) total += v;
  out.mean = total / static_cast<double>(points);
  out.q50 = quantile_sorted(sorted, 0.5);
  out.q90 = quantile_sorted(sorted, 0.9);
  out.q99 = quantile_sorted(sorted, 0.99);
  return out;
}

BlockMaximaReport block_maxima(const SystemEvaluator& sys, std::span<const std::complex<double>> a, int k_max,
                               const Grid& grid) {
  if (k_max < 0) throw std::domain_error("k_max must be nonnegative");
  BlockMaximaReport r{sys.name(), grid, {}};
  for (int k = 0; k <= k_max; ++k) r.blocks.push_back(block_maximum(sys, a, k, grid));
  return r;
}

// ---------------------------------------------------------------- bounds

namespace {

template <class F, class G, class Dist>
DeltaBoundReport delta_bound_impl(std::span<const std::complex<double>> a, std::span<const F> fs, std::span<const G> gs,
                                  int k, Dist dist) {
  if (k < 0 || k > 40) throw std::domain_error("block index out of range");
  const std::int64_t first = std::int64_t{1} << k;
  if (static_cast<std::int64_t>(fs.size()) != first || static_cast<std::int64_t>(gs.size()) != first) {
    throw std::domain_error("delta_bound: block " + std::to_string(k) + " needs " + std::to_string(first) +
                            " functions on each side");
  }
  if (static_cast<std::int64_t>(a.size()) < 2 * first - 1) throw std::domain_error("delta_bound: too few coefficients");
  DeltaBoundReport r;
  r.k = k;
  for (std::int64_t i = 0; i < first; ++i) {
    r.coeff_sq_sum += std::norm(a[static_cast<std::size_t>(first - 1 + i)]);
    const double d = dist(fs[static_cast<std::size_t>(i)], gs[static_cast<std::size_t>(i)]);
    r.distances.push_back(d);
    r.dist_sq_sum += d * d;
  }
  r.product = r.coeff_sq_sum * r.dist_sq_sum;
  r.dyadic_shape = r.dist_sq_sum <= std::ldexp(1.0, -k);
  return r;
}

}  // namespace

DeltaBoundReport delta_bound(std::span<const std::complex<double>> a, std::span<const TrigPolynomial> fs,
                             std::span<const TrigPolynomial> gs, int k) {
  return delta_bound_impl(a, fs, gs, k, [](const TrigPolynomial& f, const TrigPolynomial& g) { return poly_distance(f, g); });
}

DeltaBoundReport delta_bound(std::span<const std::complex<double>> a, std::span<const StepFunction> fs,
                             std::span<const TrigPolynomial> gs, int k) {
  return delta_bound_impl(a, fs, gs, k, [](const StepFunction& f, const TrigPolynomial& g) { return l2_distance(f, g); });
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::domain_error("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double worst = 0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return worst;
}

DistributionComparison distribution_compare(const SystemEvaluator& sys_a, std::span<const std::complex<double>> a_coeffs,
                                            const SystemEvaluator& sys_b, std::span<const std::complex<double>> b_coeffs,
                                            int k, const Grid& grid_a, const Grid& grid_b) {
  DistributionComparison out;
  out.a = block_maximum(sys_a, a_coeffs, k, grid_a);
  out.b = block_maximum(sys_b, b_coeffs, k, grid_b);
  out.ks = ks_distance(out.a.values, out.b.values);
  return out;
}

// ---------------------------------------------------------------- output

std::string maxima_csv(const BlockMaximaReport& report) {
  std::ostringstream out;
  out << "k,sup_Mk,mean_Mk,q50,q90,q99\n";
  out << std::setprecision(12);
  for (const auto& b : report.blocks) {
    out << b.k << ',' << b.sup << ',' << b.mean << ',' << b.q50 << ',' << b.q90 << ',' << b.q99 << '\n';
  }
  return out.str();
}

std::string maxima_svg(const BlockMaximaReport& report) {
  constexpr double width = 640, height = 400, margin = 50;
  double top = 0;
  for (const auto& b : report.blocks) top = std::max(top, b.sup);
  if (top <= 0) top = 1;
  const double kmax = std::max<double>(1.0, static_cast<double>(report.blocks.size()) - 1);
  auto px = [&](double k) { return margin + k / kmax * (width - 2 * margin); };
  auto py = [&](double v) { return height - margin - v / top * (height - 2 * margin); };

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  struct Series {
    const char* label;
    const char* colour;
    double BlockMaxima::*field;
  };
  const Series series[] = {{"sup", "#c0392b", &BlockMaxima::sup},
                           {"q99", "#d35400", &BlockMaxima::q99},
                           {"q90", "#2980b9", &BlockMaxima::q90},
                           {"q50", "#27ae60", &BlockMaxima::q50}};
  int row = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"2\" points=\"";
    for (const auto& b : report.blocks) out << px(b.k) << ',' << py(b.*(s.field)) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << width - margin - 40 << "\" y=\"" << margin + 16 * row << "\" fill=\"" << s.colour
        << "\" font-size=\"12\">" << s.label << "</text>\n";
    ++row;
  }
  for (const auto& b : report.blocks) {
    out << "<text x=\"" << px(b.k) - 4 << "\" y=\"" << height - margin + 16 << "\" font-size=\"12\">" << b.k << "</text>\n";
  }
  out << "<text x=\"" << margin << "\" y=\"" << margin - 10 << "\" font-size=\"12\">max " << top << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" font-size=\"12\">k</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace trigeq
