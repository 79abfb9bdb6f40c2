#pragma once

// Numerical probes on uniform grids: dyadic block maxima of partial sums,
// the Cauchy-Schwarz block error bound and Kolmogorov distances between
// block-maximum distributions of two systems.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "trigeq/crt.hpp"
#include "trigeq/mp_equiv.hpp"
#include "trigeq/reduction.hpp"
#include "trigeq/trig_poly.hpp"

namespace trigeq {

/// Points (i_1/G_1, ..., i_d/G_d), 0 <= i_j < G_j, numbered row-major.
class Grid {
 public:
  explicit Grid(std::vector<std::int64_t> resolution);
  static Grid cube(std::size_t dim, std::int64_t resolution) {
    return Grid(std::vector<std::int64_t>(dim, resolution));
  }

  std::size_t dim() const { return res_.size(); }
  const std::vector<std::int64_t>& resolution() const { return res_; }
  std::int64_t point_count() const { return count_; }
  std::vector<std::int64_t> point(std::int64_t index) const;
  std::vector<double> coordinates(std::int64_t index) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<std::int64_t> res_;
  std::int64_t count_ = 1;
};

struct GridSignal {
  Grid grid;
  std::vector<std::complex<double>> values;

  GridSignal(Grid g, std::vector<std::complex<double>> v);
};

/// Sequence f_1, f_2, ... of functions with L2 norm <= 1 that can be sampled
/// on a grid.
class SystemEvaluator {
 public:
  virtual ~SystemEvaluator() = default;

  virtual std::size_t dim() const = 0;
  /// Functions f_1 .. f_size() are defined.
  virtual std::int64_t size() const = 0;
  virtual std::string name() const = 0;

  /// Throws std::domain_error, naming the required resolution, unless the
  /// grid resolves f_first .. f_last.
  virtual void check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const = 0;

  /// Writes f_n at every grid point into out (size grid.point_count()).
  virtual void sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const = 0;

  GridSignal sample(std::int64_t n, const Grid& grid) const;

 protected:
  void check_index(std::int64_t n) const;
};

/// f_n(x) = exp(2 pi i <nu_n, x>). Needs G_j >= 4 max |nu_j| over the
/// requested functions.
class TrigSystem : public SystemEvaluator {
 public:
  TrigSystem(std::size_t dim, std::vector<Frequency> frequencies);

  std::size_t dim() const override { return dim_; }
  std::int64_t size() const override { return static_cast<std::int64_t>(freqs_.size()); }
  std::string name() const override { return "trig"; }
  void check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const override;
  void sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const override;
  using SystemEvaluator::sample;

  /// Same system multiplied by exp(2 pi i <shift, x>).
  TrigSystem modulated(const Frequency& shift) const;

 private:
  std::size_t dim_;
  std::vector<Frequency> freqs_;
};

/// f_n = t_{n_vec}^{(p_1..p_d)} for listed index vectors. Needs every G_j to
/// be a multiple of p_j so each cell holds the same number of points.
class DtsSystem : public SystemEvaluator {
 public:
  DtsSystem(std::vector<std::int64_t> axis_orders, std::vector<Frequency> indices);

  std::size_t dim() const override { return sys_.dim(); }
  std::int64_t size() const override { return static_cast<std::int64_t>(indices_.size()); }
  std::string name() const override { return "dts"; }
  void check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const override;
  void sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const override;
  using SystemEvaluator::sample;

  const DiscreteTrigSystem& system() const { return sys_; }

  /// The one-dimensional system t_{tau(n_vec)}^{(p)} carried over by the CRT
  /// cell map.
  DtsSystem reindexed() const;

 private:
  DiscreteTrigSystem sys_;
  std::vector<Frequency> indices_;
};

/// f_n = g_n of a reduction plan (one-dimensional). Point values are exact
/// on any grid; resolving_grid(k) is the smallest G >= 4 (window half-width
/// + 1) coprime to p_k, where the 4^k progression frequencies of a member
/// stay distinct mod G.
class PlanSystem : public SystemEvaluator {
 public:
  explicit PlanSystem(const ReductionPlan& plan) : plan_(&plan) {}

  std::size_t dim() const override { return 1; }
  std::int64_t size() const override { return plan_->n_max(); }
  std::string name() const override { return "plan"; }
  void check_resolution(const Grid& grid, std::int64_t first, std::int64_t last) const override;
  void sample(std::int64_t n, const Grid& grid, std::span<std::complex<double>> out) const override;
  using SystemEvaluator::sample;

  std::int64_t resolving_grid(int k) const;

 private:
  const ReductionPlan* plan_;
};

struct BlockMaxima {
  int k = 0;
  /// M_k at every grid point.
  std::vector<double> values;
  double sup = 0;
  double mean = 0;
  double q50 = 0;
  double q90 = 0;
  double q99 = 0;
};

struct BlockMaximaReport {
  std::string system;
  Grid grid;
  std::vector<BlockMaxima> blocks;
};

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// M_k(x) = max_{2^k <= m < 2^{k+1}} |sum_{n=2^k}^m a_n f_n(x)| for one block,
/// accumulated incrementally.
BlockMaxima block_maximum(const SystemEvaluator& sys, std::span<const std::complex<double>> a, int k, const Grid& grid);

/// Blocks 0..k_max; a must hold at least 2^{k_max+1} - 1 coefficients.
BlockMaximaReport block_maxima(const SystemEvaluator& sys, std::span<const std::complex<double>> a, int k_max,
                               const Grid& grid);

struct DeltaBoundReport {
  int k = 0;
  std::vector<double> distances;
  double coeff_sq_sum = 0;
  double dist_sq_sum = 0;
  double product = 0;
  /// sum of squared distances <= 2^{-k}.
  bool dyadic_shape = false;
};

/// (sum_{n in block k} |a_n|^2) * (sum ||f_n - g_n||^2), the bound on
/// ||sum a_n (f_n - g_n)||^2. fs and gs list the 2^k block members in order.
DeltaBoundReport delta_bound(std::span<const std::complex<double>> a, std::span<const TrigPolynomial> fs,
                             std::span<const TrigPolynomial> gs, int k);
DeltaBoundReport delta_bound(std::span<const std::complex<double>> a, std::span<const StepFunction> fs,
                             std::span<const TrigPolynomial> gs, int k);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| with ties handled
/// exactly.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct DistributionComparison {
  double ks = 0;
  BlockMaxima a;
  BlockMaxima b;
};

DistributionComparison distribution_compare(const SystemEvaluator& sys_a, std::span<const std::complex<double>> a_coeffs,
                                            const SystemEvaluator& sys_b, std::span<const std::complex<double>> b_coeffs,
                                            int k, const Grid& grid_a, const Grid& grid_b);

/// CSV with columns k,sup_Mk,mean_Mk,q50,q90,q99.
std::string maxima_csv(const BlockMaximaReport& report);
/// Static SVG chart of sup and quantiles against k.
std::string maxima_svg(const BlockMaximaReport& report);

}  // namespace trigeq
