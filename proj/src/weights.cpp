#include "trigeq/weights.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace trigeq {

WeightSequence::WeightSequence(std::string name, std::function<double(std::int64_t)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {
  if (!fn_) throw std::invalid_argument("WeightSequence: empty rule");
}

WeightSequence WeightSequence::log1() {
  return {"log", [](std::int64_t n) { return std::log(static_cast<double>(n) + 2.0); }};
}

WeightSequence WeightSequence::log2() {
  return {"log2", [](std::int64_t n) {
            const double l = std::log(static_cast<double>(n) + 2.0);
            return l * l;
          }};
}

WeightSequence WeightSequence::power(double alpha) {
  std::ostringstream name;
  name << "pow:" << alpha;
  return {name.str(), [alpha](std::int64_t n) { return std::pow(static_cast<double>(n), alpha); }};
}

WeightSequence WeightSequence::constant(double c) {
  std::ostringstream name;
  name << "const:" << c;
  return {name.str(), [c](std::int64_t) { return c; }};
}

WeightSequence WeightSequence::table(std::vector<double> values) {
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  return {"table", [data](std::int64_t n) {
            if (n > static_cast<std::int64_t>(data->size())) {
              throw std::domain_error("weight table has no entry for n = " + std::to_string(n));
            }
            return (*data)[static_cast<std::size_t>(n - 1)];
          }};
}

WeightSequence WeightSequence::parse(const std::string& spec) {
  if (spec == "log") return log1();
  if (spec == "log2") return log2();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("unknown weight '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "pow" || kind == "const") {
    std::size_t used = 0;
    const double v = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument("bad number in weight '" + spec + "'");
    return kind == "pow" ? power(v) : constant(v);
  }
  if (kind == "table") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open weight table " + arg);
    std::vector<double> values;
    double v = 0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw std::invalid_argument("malformed weight table " + arg);
    if (values.empty()) throw std::invalid_argument("empty weight table " + arg);
    return table(std::move(values));
  }
  throw std::invalid_argument("unknown weight '" + spec + "'");
}

double WeightSequence::operator()(std::int64_t n) const {
  if (n < 1) throw std::domain_error("weights are indexed from 1");
  const double v = fn_(n);
  if (!(v > 0.0)) throw std::domain_error("weight " + name_ + " is not positive at n = " + std::to_string(n));
  return v;
}

void require_admissible(const WeightSequence& w, std::int64_t n_max) {
  if (n_max < 2) throw std::domain_error("admissibility needs a range of at least 2");
  double prev = w(1);
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const double v = w(n);
    if (v < prev) throw std::domain_error("weight " + w.name() + " decreases at n = " + std::to_string(n));
    prev = v;
  }
  if (!(prev > w(1))) throw std::domain_error("weight " + w.name() + " does not increase on 1.." + std::to_string(n_max));
}

namespace {

double doubling_over(const WeightSequence& w, std::int64_t limit, std::int64_t& argmax) {
  double best = 0;
  argmax = 1;
  for (std::int64_t n = 1; n <= limit; ++n) {
    const double r = w(n * n) / w(n);
    if (r > best) {
      best = r;
      argmax = n;
    }
  }
  return best;
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

WeightCheckReport weight_check(const WeightSequence& w, std::int64_t n_max) {
  if (n_max < 4) throw std::domain_error("weight_check needs N >= 4");
  WeightCheckReport r;
  r.name = w.name();
  r.n_max = n_max;

  double prev = w(1);
  double sum = 1.0 / prev;
  std::int64_t next_checkpoint = 1;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double v = w(n);
    if (n > 1) {
      if (v < prev) {
        ++r.monotonicity_violations;
        if (r.first_violations.size() < 8) r.first_violations.push_back(n);
      }
      sum += 1.0 / (static_cast<double>(n) * v);
    }
    if (n == next_checkpoint) {
      r.reciprocal_sums.push_back({n, sum});
      next_checkpoint *= 2;
    }
    prev = v;
  }
  r.increases = w(n_max) > w(1);

  const std::int64_t root = isqrt(n_max);
  r.doubling_constant = doubling_over(w, root, r.doubling_argmax);
  std::int64_t unused = 1;
  r.doubling_constant_half_range = doubling_over(w, isqrt(root), unused);
  r.doubling_flagged = r.doubling_constant > kDoublingGrowthTolerance * r.doubling_constant_half_range;

  for (std::int64_t n : {n_max / 4, n_max / 2, n_max}) {
    const double l = std::log(static_cast<double>(n));
    r.envelopes.push_back({n, w(n) / l, w(n) / (l * l)});
  }

  r.notes.push_back("increase over 1..N stands in for w(n) -> infinity");
  r.notes.push_back("partial sums of 1/(n w(n)) are diagnostic; convergence is not decidable at finite N");
  if (r.doubling_flagged) r.notes.push_back("w(n^2)/w(n) keeps growing with the range: doubling hypothesis looks violated");
  if (r.monotonicity_violations > 0) r.notes.push_back("w is not monotone on the tested range");
  return r;
}

}  // namespace trigeq
