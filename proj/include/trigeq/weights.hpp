#pragma once

// Weight sequences w(n) for weighted convergence criteria, and a finite-range
// admissibility scan.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace trigeq {

class WeightSequence {
 public:
  WeightSequence(std::string name, std::function<double(std::int64_t)> fn);

  /// log(n + 2)
  static WeightSequence log1();
  /// log(n + 2)^2
  static WeightSequence log2();
  /// n^alpha
  static WeightSequence power(double alpha);
  static WeightSequence constant(double c);
  /// w(n) = values[n - 1]; evaluation beyond the table throws.
  static WeightSequence table(std::vector<double> values);

  /// "log", "log2", "pow:<alpha>", "const:<c>" or "table:<path>" (one value
  /// per line or whitespace separated).
  static WeightSequence parse(const std::string& spec);

  const std::string& name() const { return name_; }

  /// Throws std::domain_error for n < 1 or a nonpositive value.
  double operator()(std::int64_t n) const;

 private:
  std::string name_;
  std::function<double(std::int64_t)> fn_;
};

/// Throws std::domain_error unless w is positive and nondecreasing on
/// 1..n_max with w(n_max) > w(1).
void require_admissible(const WeightSequence& w, std::int64_t n_max);

struct WeightCheckReport {
  struct Envelope {
    std::int64_t n;
    double over_log;
    double over_log2;
  };
  struct Checkpoint {
    std::int64_t n;
    double partial_sum;
  };

  std::string name;
  std::int64_t n_max = 0;
  std::int64_t monotonicity_violations = 0;
  std::vector<std::int64_t> first_violations;
  /// w(n_max) > w(1), the finite stand-in for w -> infinity.
  bool increases = false;
  /// max_{n <= sqrt(N)} w(n^2) / w(n) and the argmax.
  double doubling_constant = 0;
  std::int64_t doubling_argmax = 1;
  /// Same quantity over n <= N^{1/4}.
  double doubling_constant_half_range = 0;
  /// Set when the doubling constant keeps growing with the range.
  bool doubling_flagged = false;
  std::vector<Envelope> envelopes;
  /// Partial sums of 1 / (n w(n)) at n = 2^j.
  std::vector<Checkpoint> reciprocal_sums;
  std::vector<std::string> notes;
};

/// Doubling constant growth factor beyond which the hypothesis
/// w(n^2) <= C w(n) is flagged.
inline constexpr double kDoublingGrowthTolerance = 1.25;

WeightCheckReport weight_check(const WeightSequence& w, std::int64_t n_max);

}  // namespace trigeq
