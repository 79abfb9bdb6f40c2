#pragma once

// JSON forms of polynomials, distributions, cell maps, plans and reports.
// Integers beyond int64 (plan shifts and frequencies) are written as decimal
// strings; every reader accepts both forms.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trigeq/crt.hpp"
#include "trigeq/lab.hpp"
#include "trigeq/mp_equiv.hpp"
#include "trigeq/reduction.hpp"
#include "trigeq/trig_poly.hpp"
#include "trigeq/weights.hpp"

namespace trigeq {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input. line/column are 1-based and 0 when
/// unknown.
class JsonInputError : public std::runtime_error {
 public:
  JsonInputError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Json parse_json_text(const std::string& text);
/// Reads and parses a file; errors name the path and, for syntax errors,
/// the line and column.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json wide_to_json(Wide v);
Wide wide_from_json(const Json& j);

Json complex_to_json(std::complex<double> z);
std::complex<double> complex_from_json(const Json& j);

/// {dim, terms:[{freq:[...], re, im}]}
Json poly_to_json(const TrigPolynomial& f);
TrigPolynomial poly_from_json(const Json& j);

/// [{values:[{num,mod} | {re,im}], measure:{num,den}}]
Json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const Json& j);

/// [{from:[u_1..u_d], to:u}] for the CRT cell bijection.
Json cell_map_to_json(const CoprimeModuli& moduli);
/// Checks that the listing is the CRT bijection of the given moduli.
MPCellMap cell_map_from_json(const Json& j, const CoprimeModuli& moduli);

/// Input sequences: {"mode":"rc","dim":d,"indices":[[...],...]} or
/// {"mode":"src","dim":d,"polys":[poly,...]}; a bare list of index vectors
/// is read as RC.
Json input_to_json(const MultiIndexSequence& input);
MultiIndexSequence input_from_json(const Json& j);

/// Coefficients: a list of numbers, {re,im} objects or [re,im] pairs, or an
/// object holding such a list under "a".
std::vector<std::complex<double>> coefficients_from_json(const Json& j);
Json coefficients_to_json(std::span<const std::complex<double>> a);

/// {mode, dim, n_max, offsets, blocks:[{k, moduli, shift, window, eps, ...,
/// members:[{n, n_vec, components, ..., terms:[{m, re, im}]}]}]}. Compact
/// output omits the term lists.
Json plan_to_json(const ReductionPlan& plan, bool compact = false);
/// Rebuilds the plan from its symbolic fields and checks residues, windows,
/// offsets and, when present, every listed term against the rebuilt plan.
ReductionPlan plan_from_json(const Json& j);

Json structure_report_to_json(const PlanStructureReport& r);
Json weight_report_to_json(const WeightCheckReport& r);
Json certificate_to_json(const BlockCertificate& c);

}  // namespace trigeq
