#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trigeq/crt.hpp"
#include "trigeq/dts.hpp"
#include "trigeq/json_io.hpp"
#include "trigeq/lab.hpp"
#include "trigeq/mp_equiv.hpp"
#include "trigeq/reduction.hpp"
#include "trigeq/weights.hpp"

namespace py = pybind11;
using namespace trigeq;
using cd = std::complex<double>;

namespace {

// {(nu_1, ..., nu_d): coefficient}
py::dict poly_terms(const TrigPolynomial& f) {
  py::dict out;
  for (const auto& [freq, c] : f.terms()) out[py::tuple(py::cast(freq))] = c;
  return out;
}

std::string maxima_json(const BlockMaximaReport& r) {
  Json blocks = Json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"k", b.k}, {"sup", b.sup}, {"mean", b.mean}, {"q50", b.q50}, {"q90", b.q90}, {"q99", b.q99}});
  }
  return Json{{"system", r.system}, {"resolution", r.grid.resolution()}, {"blocks", blocks}}.dump();
}

}  // namespace

PYBIND11_MODULE(_trigeq, m) {
  m.doc() = "Discrete trigonometric systems, CRT reindexing and the reduction to a single series";

  py::register_exception<JsonInputError>(m, "JsonInputError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

  m.def("dts_eval", &dts_eval, py::arg("l"), py::arg("n"), py::arg("x"));
  m.def("dts_fourier_coeff", &dts_fourier_coeff, py::arg("l"), py::arg("n"), py::arg("m"));
  m.def(
      "dts_truncation_error",
      [](std::int64_t l, std::int64_t n, std::int64_t terms) {
        return std::sqrt(dts_truncation_error_sq(l, n, central_window(terms)));
      },
      py::arg("l"), py::arg("n"), py::arg("terms"));
  m.def(
      "dts_truncate", [](std::int64_t l, std::int64_t n, std::int64_t terms) { return poly_terms(dts_truncate(l, n, terms)); },
      py::arg("l"), py::arg("n"), py::arg("terms"));

  m.def(
      "crt_tau",
      [](const std::vector<std::int64_t>& moduli, const std::vector<std::int64_t>& r) {
        return crt_tau(CoprimeModuli(moduli), r);
      },
      py::arg("moduli"), py::arg("residues"));
  m.def(
      "crt_tau_inverse",
      [](const std::vector<std::int64_t>& moduli, std::int64_t l) { return crt_tau_inverse(CoprimeModuli(moduli), l); },
      py::arg("moduli"), py::arg("l"));
  m.def(
      "crt_tau_bar",
      [](const std::vector<std::int64_t>& moduli, const std::vector<std::int64_t>& r) {
        return crt_tau_bar(CoprimeModuli(moduli), r);
      },
      py::arg("moduli"), py::arg("residues"));
  m.def(
      "crt_tau_bar_inverse",
      [](const std::vector<std::int64_t>& moduli, std::int64_t u) { return crt_tau_bar_inverse(CoprimeModuli(moduli), u); },
      py::arg("moduli"), py::arg("u"));
  m.def(
      "check_crt",
      [](const std::vector<std::int64_t>& moduli, bool congruence) {
        const auto r = check_crt(CoprimeModuli(moduli), congruence);
        py::dict d;
        d["cells"] = r.cells;
        d["tau_failures"] = r.tau_failures;
        d["tau_bar_failures"] = r.tau_bar_failures;
        d["congruence_checks"] = r.congruence_checks;
        d["congruence_failures"] = r.congruence_failures;
        d["passed"] = r.passed();
        return d;
      },
      py::arg("moduli"), py::arg("congruence") = true);
  m.def(
      "cell_map_json", [](const std::vector<std::int64_t>& moduli) { return cell_map_to_json(CoprimeModuli(moduli)).dump(); },
      py::arg("moduli"));
  m.def(
      "verify_prob_equiv",
      [](const std::vector<std::int64_t>& moduli) {
        const CoprimeModuli c(moduli);
        return verify_prob_equiv(full_multi_dts(c), full_reindexed_dts(c));
      },
      py::arg("moduli"));
  m.def(
      "joint_distribution_json",
      [](const std::vector<std::int64_t>& moduli, bool reindexed) {
        const CoprimeModuli c(moduli);
        return distribution_to_json(joint_distribution(reindexed ? full_reindexed_dts(c) : full_multi_dts(c))).dump();
      },
      py::arg("moduli"), py::arg("reindexed") = false);

  m.def("random_multi_indices", &random_multi_indices, py::arg("dim"), py::arg("count"), py::arg("radius"),
        py::arg("seed"));

  py::class_<ReductionPlan>(m, "Plan")
      .def_property_readonly("mode", [](const ReductionPlan& p) { return to_string(p.mode()); })
      .def_property_readonly("dim", &ReductionPlan::dim)
      .def_property_readonly("n_max", &ReductionPlan::n_max)
      .def_property_readonly("offsets", &ReductionPlan::offsets)
      .def_property_readonly("total_terms", &ReductionPlan::total_terms)
      .def("block_eps", [](const ReductionPlan& p, int k) { return p.block(k).eps; }, py::arg("k"))
      .def("block_moduli", [](const ReductionPlan& p, int k) { return p.block(k).moduli.moduli(); }, py::arg("k"))
      .def(
          "slot_polynomial", [](const ReductionPlan& p, std::int64_t n) { return poly_terms(p.slot_polynomial(n)); },
          py::arg("n"))
      .def("to_json", [](const ReductionPlan& p, bool compact) { return plan_to_json(p, compact).dump(); },
           py::arg("compact") = false)
      .def_static("from_json", [](const std::string& text) { return plan_from_json(parse_json_text(text)); },
                  py::arg("text"))
      .def(
          "check_structure_json",
          [](const ReductionPlan& p) { return structure_report_to_json(check_plan_structure(p)).dump(); })
      .def("map_coefficients",
           [](const ReductionPlan& p, const std::vector<cd>& a) { return map_coefficients(p, a); }, py::arg("a"))
      .def(
          "weight_transfer",
          [](const ReductionPlan& p, const std::vector<cd>& a, const std::string& w) {
            const auto r = verify_weight_transfer(p, a, WeightSequence::parse(w));
            py::dict d;
            d["lhs"] = r.lhs;
            d["rhs"] = r.rhs;
            d["c_star"] = r.c_star;
            d["c_star_argmax"] = r.c_star_argmax;
            d["holds"] = r.holds;
            return d;
          },
          py::arg("a"), py::arg("w") = "log2");

  m.def(
      "reduce",
      [](const std::vector<Frequency>& indices, std::int64_t n_max) {
        const std::size_t dim = indices.empty() ? 1 : indices.front().size();
        return build_reduction(MultiIndexSequence::rc(dim, indices), n_max);
      },
      py::arg("indices"), py::arg("n_max"));
  m.def(
      "reduce_input_json",
      [](const std::string& text, std::int64_t n_max) {
        return build_reduction(input_from_json(parse_json_text(text)), n_max);
      },
      py::arg("text"), py::arg("n_max"));

  m.def(
      "weight_check_json",
      [](const std::string& w, std::int64_t n_max) { return weight_report_to_json(weight_check(WeightSequence::parse(w), n_max)).dump(); },
      py::arg("w"), py::arg("n_max"));

  py::class_<SystemEvaluator>(m, "System")
      .def_property_readonly("dim", &SystemEvaluator::dim)
      .def_property_readonly("size", &SystemEvaluator::size)
      .def_property_readonly("name", &SystemEvaluator::name)
      .def(
          "sample",
          [](const SystemEvaluator& s, std::int64_t n, const std::vector<std::int64_t>& resolution) {
            return s.sample(n, Grid(resolution)).values;
          },
          py::arg("n"), py::arg("resolution"));
  py::class_<TrigSystem, SystemEvaluator>(m, "TrigSystem")
      .def(py::init<std::size_t, std::vector<Frequency>>(), py::arg("dim"), py::arg("frequencies"));
  py::class_<DtsSystem, SystemEvaluator>(m, "DtsSystem")
      .def(py::init<std::vector<std::int64_t>, std::vector<Frequency>>(), py::arg("orders"), py::arg("indices"))
      .def("reindexed", &DtsSystem::reindexed);
  py::class_<PlanSystem, SystemEvaluator>(m, "PlanSystem")
      .def(py::init<const ReductionPlan&>(), py::arg("plan"), py::keep_alive<1, 2>())
      .def("resolving_grid", &PlanSystem::resolving_grid, py::arg("k"));

  m.def(
      "block_maxima_json",
      [](const SystemEvaluator& s, const std::vector<cd>& a, int k_max, const std::vector<std::int64_t>& resolution) {
        return maxima_json(block_maxima(s, a, k_max, Grid(resolution)));
      },
      py::arg("system"), py::arg("a"), py::arg("k_max"), py::arg("resolution"));
  m.def(
      "ks_distance", [](const std::vector<double>& a, const std::vector<double>& b) { return ks_distance(a, b); },
      py::arg("a"), py::arg("b"));
}
