// trigeq: command-line front end.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input error.

#include <CLI11.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>

#include "trigeq/arith.hpp"
#include "trigeq/crt.hpp"
#include "trigeq/dts.hpp"
#include "trigeq/json_io.hpp"
#include "trigeq/lab.hpp"
#include "trigeq/reduction.hpp"
#include "trigeq/weights.hpp"

using namespace trigeq;
using cd = std::complex<double>;

namespace {

constexpr double kCoeffTolerance = 1e-10;

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

// Output paths must land in an existing directory.
const auto kWritable = CLI::Validator(
    [](std::string& path) -> std::string {
      if (path.empty() || path == "-") return {};
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty() && !std::filesystem::is_directory(parent)) return "directory does not exist: " + parent.string();
      return {};
    },
    "WRITABLE");

CoprimeModuli moduli_from(const std::vector<std::int64_t>& list) {
  if (list.empty()) throw CLI::ValidationError("--moduli", "needs at least one modulus");
  return CoprimeModuli(list);
}

// ---------------------------------------------------------------- dts

cd coefficient_by_quadrature(std::int64_t l, std::int64_t n, std::int64_t m) {
  using boost::math::quadrature::gauss_kronrod;
  cd total{};
  for (std::int64_t k = 0; k < l; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(l);
    const double b = static_cast<double>(k + 1) / static_cast<double>(l);
    const double step = 2 * std::numbers::pi * static_cast<double>(n * k % l) / static_cast<double>(l);
    auto re = [&](double x) { return std::cos(step - 2 * std::numbers::pi * static_cast<double>(m) * x); };
    auto im = [&](double x) { return std::sin(step - 2 * std::numbers::pi * static_cast<double>(m) * x); };
    total += cd(gauss_kronrod<double, 61>::integrate(re, a, b, 0), gauss_kronrod<double, 61>::integrate(im, a, b, 0));
  }
  return total;
}

struct DtsArgs {
  std::int64_t order = 0;
  std::vector<std::int64_t> moduli;
  bool coeffs = false;
  std::int64_t mmax = 0;
  std::int64_t spectrum = -1;
  std::string out;
};

int cmd_dts(const DtsArgs& a) {
  if ((a.order > 0) == !a.moduli.empty()) throw CLI::ValidationError("dts", "give exactly one of --order and --moduli");
  if (a.coeffs && a.order == 0) throw CLI::ValidationError("--coeffs", "needs --order");
  const std::vector<std::int64_t> orders = a.order > 0 ? std::vector<std::int64_t>{a.order} : a.moduli;
  if (!a.moduli.empty()) moduli_from(a.moduli);
  const DiscreteTrigSystem sys(orders);
  const CellPartition cells(orders);

  Json out;
  if (a.order > 0) {
    out["order"] = a.order;
  } else {
    out["moduli"] = a.moduli;
    out["order"] = sys.order();
  }
  Json functions = Json::array();
  for (std::int64_t i = 0; i < cells.cell_count(); ++i) {
    const auto n_vec = cells.cell_of(i);
    Json values = Json::array();
    for (std::int64_t c = 0; c < cells.cell_count(); ++c) {
      const auto ph = sys.phase_at_cell(n_vec, cells.cell_of(c));
      values.push_back(Json{{"num", ph.num()}, {"mod", ph.den()}});
    }
    Json f;
    if (a.order > 0) {
      f["n"] = n_vec[0];
    } else {
      f["n_vec"] = n_vec;
    }
    f["cells"] = std::move(values);
    functions.push_back(std::move(f));
  }
  out["functions"] = std::move(functions);

  bool ok = true;
  if (a.coeffs) {
    if (a.mmax < 0) throw CLI::ValidationError("--mmax", "must be nonnegative");
    Json table = Json::array();
    double worst = 0;
    for (std::int64_t n = 0; n < a.order; ++n) {
      Json terms = Json::array();
      for (std::int64_t m = -a.mmax; m <= a.mmax; ++m) {
        const cd c = dts_fourier_coeff(a.order, n, m);
        worst = std::max(worst, std::abs(c - coefficient_by_quadrature(a.order, n, m)));
        terms.push_back(Json{{"m", m}, {"re", c.real()}, {"im", c.imag()}});
      }
      table.push_back(Json{{"n", n}, {"terms", std::move(terms)}});
    }
    ok = worst <= kCoeffTolerance;
    out["coefficients"] = std::move(table);
    out["quadrature_check"] = Json{{"max_deviation", worst}, {"tolerance", kCoeffTolerance}, {"passed", ok}};
  }
  if (a.spectrum >= 0) {
    if (a.order == 0) throw CLI::ValidationError("--spectrum", "needs --order");
    Json spec = Json::array();
    for (std::int64_t n = 0; n < a.order; ++n) {
      spec.push_back(Json{{"n", n}, {"freqs", Json::array()}});
      const auto freqs = dts_spectrum(a.order, n, a.spectrum);
      for (const auto& f : freqs.members()) spec.back()["freqs"].push_back(f[0]);
    }
    out["spectrum"] = Json{{"half_width", a.spectrum}, {"functions", std::move(spec)}};
  }
  emit(a.out, dump(out));
  std::cerr << (ok ? "PASS" : "FAIL") << " dts: " << cells.cell_count() << " functions\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- crt

int cmd_crt_map(const std::vector<std::int64_t>& list, const std::string& path) {
  const auto moduli = moduli_from(list);
  const auto j = cell_map_to_json(moduli);
  const auto text = dump(j);
  // Parse our own output back; throws on any disagreement with the CRT map.
  cell_map_from_json(parse_json_text(text), moduli);
  const auto r = check_crt(moduli, false);
  emit(path, text);
  std::cerr << (r.passed() ? "PASS" : "FAIL") << " crt-map: " << r.cells << " cells\n";
  return r.passed() ? 0 : 1;
}

int cmd_verify_equiv(const std::vector<std::int64_t>& list, std::uint64_t seed, std::size_t trials,
                     const std::string& path) {
  const auto moduli = moduli_from(list);
  const auto crt = check_crt(moduli, true);
  const bool equiv = verify_prob_equiv(full_multi_dts(moduli), full_reindexed_dts(moduli));
  const auto theta = build_theta(moduli);
  const bool exhaustive = moduli.product() <= 12;
  const auto axioms = exhaustive ? mp_check_axioms_exhaustive(theta.assignment()) : mp_check_axioms(theta, trials, seed);
  const bool ok = crt.passed() && equiv && axioms.passed();

  Json axj{{"mode", exhaustive ? "exhaustive" : "sampled"}, {"checks", axioms.checks}, {"failures", axioms.failures}};
  if (!exhaustive) {
    axj["seed"] = seed;
    axj["trials"] = trials;
  }
  const Json out{{"moduli", moduli.moduli()},
                 {"p", moduli.product()},
                 {"cells_checked", crt.cells},
                 {"tau_failures", crt.tau_failures},
                 {"tau_bar_failures", crt.tau_bar_failures},
                 {"congruence_checks", crt.congruence_checks},
                 {"congruence_failures", crt.congruence_failures},
                 {"prob_equiv", equiv},
                 {"comparison", "exact"},
                 {"axioms", std::move(axj)},
                 {"passed", ok}};
  emit(path, dump(out));
  std::cerr << (ok ? "PASS" : "FAIL") << " verify-equiv: " << crt.cells << " cells checked\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string input;
  std::int64_t n = 0;
  std::string mode = "rc";
  std::size_t dim = 2;
  std::int64_t radius = 40;
  std::uint64_t seed = 1;
  bool compact = false;
  std::string out;
};

MultiIndexSequence random_input(ReductionMode mode, std::size_t dim, std::int64_t n, std::int64_t radius,
                                std::uint64_t seed) {
  if (mode == ReductionMode::RC) {
    return MultiIndexSequence::rc(dim, random_multi_indices(dim, static_cast<std::size_t>(n), radius, seed));
  }
  const auto idx = random_multi_indices(dim, 2 * static_cast<std::size_t>(n), radius, seed);
  std::vector<TrigPolynomial> polys;
  for (std::int64_t i = 0; i < n; ++i) {
    TrigPolynomial p(dim);
    p.add(idx[static_cast<std::size_t>(2 * i)], 0.6);
    p.add(idx[static_cast<std::size_t>(2 * i + 1)], cd(0, 0.8));
    polys.push_back(std::move(p));
  }
  return MultiIndexSequence::src(dim, std::move(polys));
}

Json plan_document(const ReductionPlan& plan, bool compact, const Json& run) {
  Json j = plan_to_json(plan, compact);
  j["run"] = run;
  j["structure"] = structure_report_to_json(check_plan_structure(plan));
  return j;
}

int cmd_reduce(const ReduceArgs& a) {
  const auto mode = parse_mode(a.mode);
  Json run{{"command", "reduce"}};
  std::optional<MultiIndexSequence> input;
  if (!a.input.empty()) {
    input = input_from_json(read_json_file(a.input));
    if (input->mode() != mode) throw CLI::ValidationError("--mode", "differs from the mode of the input file");
    run["input"] = std::filesystem::path(a.input).filename().string();
  } else {
    if (a.dim < 1) throw CLI::ValidationError("--dim", "must be at least 1");
    input = random_input(mode, a.dim, a.n, a.radius, a.seed);
    run["input"] = "random";
    run["dim"] = a.dim;
    run["radius"] = a.radius;
  }
  run["seed"] = a.seed;
  if (a.n < 1 || a.n > static_cast<std::int64_t>(input->size())) {
    throw CLI::ValidationError("--n", "must lie in 1.." + std::to_string(input->size()));
  }
  const auto plan = build_reduction(*input, a.n);
  const auto doc = plan_document(plan, a.compact, run);
  emit(a.out, dump(doc));
  const bool ok = doc["structure"]["passed"].get<bool>();
  std::cerr << (ok ? "PASS" : "FAIL") << " reduce: " << plan.total_terms() << " terms in " << plan.blocks().size()
            << " blocks\n";
  return ok ? 0 : 1;
}

int cmd_check_plan(const std::string& path, bool certificates, const std::string& out) {
  std::ifstream in(path);
  if (!in) throw JsonInputError("cannot read " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto j = parse_json_text(text);
  const auto plan = plan_from_json(j);
  const bool compact = j.contains("compact") && j["compact"].get<bool>();
  const auto again = dump(plan_document(plan, compact, j.contains("run") ? j["run"] : Json::object()));
  const bool roundtrip = again == text;
  const auto structure = check_plan_structure(plan);
  bool ok = roundtrip && structure.passed();
  Json report{{"plan", std::filesystem::path(path).filename().string()},
              {"roundtrip_identical", roundtrip},
              {"structure", structure_report_to_json(structure)}};
  if (certificates) {
    Json certs = Json::array();
    for (const auto& b : plan.blocks()) {
      const auto c = block_equivalence_certificate(plan, b.k);
      ok = ok && c.passed;
      certs.push_back(certificate_to_json(c));
    }
    report["certificates"] = std::move(certs);
  }
  report["passed"] = ok;
  emit(out, dump(report));
  std::cerr << (ok ? "PASS" : "FAIL") << " check-plan\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- coeffs

std::vector<cd> load_coefficients(const std::string& spec, std::int64_t n) {
  if (spec == "harmonic") {
    std::vector<cd> a;
    for (std::int64_t i = 1; i <= n; ++i) a.emplace_back(1.0 / static_cast<double>(i));
    return a;
  }
  return coefficients_from_json(read_json_file(spec));
}

int cmd_coeffs(const std::string& plan_path, const std::string& coeff_spec, const std::string& w_spec,
               std::optional<double> c_max, bool emit_c, const std::string& out) {
  const auto plan = plan_from_json(read_json_file(plan_path));
  const auto a = load_coefficients(coeff_spec, plan.n_max());
  const auto w = WeightSequence::parse(w_spec);
  const auto r = verify_weight_transfer(plan, a, w);
  const bool ok = r.holds && (!c_max || r.c_star <= *c_max);
  Json j{{"plan", std::filesystem::path(plan_path).filename().string()},
         {"coeffs", coeff_spec == "harmonic" ? coeff_spec : std::filesystem::path(coeff_spec).filename().string()},
         {"weight", w.name()},
         {"n_max", plan.n_max()},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"c_star", r.c_star},
         {"c_star_argmax", r.c_star_argmax},
         {"holds", r.holds},
         {"inequality", "lhs <= c_star * rhs"}};
  if (c_max) j["c_star_max"] = *c_max;
  if (emit_c) j["c"] = coefficients_to_json(map_coefficients(plan, a))["a"];
  j["passed"] = ok;
  emit(out, dump(j));
  std::cerr << (ok ? "PASS" : "FAIL") << " coeffs: C* = " << r.c_star << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- maxima

int cmd_maxima(const std::string& plan_path, const std::string& input_path, const std::string& coeff_spec, int kmax,
               std::int64_t grid, const std::string& out, const std::string& plot) {
  if ((plan_path.empty()) == (input_path.empty())) throw CLI::ValidationError("maxima", "give exactly one of --plan and --input");
  if (kmax < 0 || kmax > 12) throw CLI::ValidationError("--kmax", "must lie in 0..12");
  if (grid < 2) throw CLI::ValidationError("--grid", "must be at least 2");
  const std::int64_t need = (std::int64_t{2} << kmax) - 1;
  const auto a = load_coefficients(coeff_spec, need);

  std::optional<ReductionPlan> plan;
  std::unique_ptr<SystemEvaluator> sys;
  std::size_t dim = 1;
  if (!plan_path.empty()) {
    plan = plan_from_json(read_json_file(plan_path));
    sys = std::make_unique<PlanSystem>(*plan);
  } else {
    const auto input = input_from_json(read_json_file(input_path));
    if (input.mode() != ReductionMode::RC) throw CLI::ValidationError("--input", "maxima needs an index sequence");
    dim = input.dim();
    sys = std::make_unique<TrigSystem>(dim, input.indices());
  }
  const auto report = block_maxima(*sys, a, kmax, Grid::cube(dim, grid));
  emit(out, maxima_csv(report));
  if (!plot.empty()) write_text_file(plot, maxima_svg(report));
  std::cerr << "PASS maxima: " << report.blocks.size() << " blocks on " << grid << "^" << dim << " points\n";
  return 0;
}

// ---------------------------------------------------------------- weights

int cmd_weight_check(const std::string& spec, std::int64_t n, std::optional<double> c_max, const std::string& out) {
  const auto w = WeightSequence::parse(spec);
  const auto r = weight_check(w, n);
  const bool ok = r.monotonicity_violations == 0 && r.increases && (!c_max || r.doubling_constant <= *c_max);
  Json j = weight_report_to_json(r);
  if (c_max) j["doubling_constant_max"] = *c_max;
  j["passed"] = ok;
  emit(out, dump(j));
  std::cerr << (ok ? "PASS" : "FAIL") << " weight-check: C(N) = " << r.doubling_constant << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete trigonometric systems, CRT reindexing and series reduction"};
  app.require_subcommand(1);

  DtsArgs dts;
  auto* c_dts = app.add_subcommand("dts", "Tabulate a DTS, its Fourier coefficients and spectra");
  c_dts->add_option("--order", dts.order, "Order l of a one-dimensional system")->check(CLI::Range(1, 1 << 16));
  c_dts->add_option("--moduli", dts.moduli, "Pairwise coprime orders of a multiple system")->delimiter(',');
  c_dts->add_flag("--coeffs", dts.coeffs, "Emit Fourier coefficients for |m| <= mmax");
  c_dts->add_option("--mmax", dts.mmax, "Coefficient range")->default_val(4);
  c_dts->add_option("--spectrum", dts.spectrum, "Emit spectra with |j| <= half-width");
  c_dts->add_option("--out", dts.out, "Output file (default stdout)")->check(kWritable);

  std::vector<std::int64_t> moduli;
  std::string emit_path;
  auto* c_map = app.add_subcommand("crt-map", "Emit the CRT cell bijection");
  c_map->add_option("--moduli", moduli, "Pairwise coprime moduli")->delimiter(',')->required();
  c_map->add_option("--emit", emit_path, "Output file (default stdout)")->check(kWritable);

  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::string out;
  auto* c_eq = app.add_subcommand("verify-equiv", "Check the CRT correspondence and probabilistic equivalence");
  c_eq->add_option("--moduli", moduli, "Pairwise coprime moduli")->delimiter(',')->required();
  c_eq->add_option("--seed", seed, "Seed for sampled axiom checks")->default_val(1);
  c_eq->add_option("--trials", trials, "Sampled axiom checks")->default_val(1000);
  c_eq->add_option("--out", out, "Output file (default stdout)")->check(kWritable);

  ReduceArgs red;
  auto* c_red = app.add_subcommand("reduce", "Build a reduction plan");
  c_red->add_option("--input", red.input, "Index or polynomial sequence (JSON)")->check(CLI::ExistingFile);
  c_red->add_option("--n", red.n, "Number of inputs N")->required();
  c_red->add_option("--mode", red.mode, "rc or src")->check(CLI::IsMember({"rc", "src"}))->default_val("rc");
  c_red->add_option("--dim", red.dim, "Dimension of random inputs")->default_val(2);
  c_red->add_option("--radius", red.radius, "Coordinate bound of random inputs")->default_val(40);
  c_red->add_option("--seed", red.seed, "Seed of random inputs")->default_val(1);
  c_red->add_flag("--compact", red.compact, "Omit term lists");
  c_red->add_option("--out", red.out, "Output file (default stdout)")->check(kWritable);

  std::string plan_path;
  bool certificates = false;
  auto* c_chk = app.add_subcommand("check-plan", "Re-verify a plan file and its JSON round trip");
  c_chk->add_option("--plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  c_chk->add_flag("--certificates", certificates, "Also certify every block");
  c_chk->add_option("--out", out, "Output file (default stdout)")->check(kWritable);

  std::string coeff_spec = "harmonic";
  std::string w_spec = "log2";
  std::optional<double> c_max;
  bool emit_c = false;
  auto* c_co = app.add_subcommand("coeffs", "Map coefficients through a plan and check weight transfer");
  c_co->add_option("--plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  c_co->add_option("--coeffs", coeff_spec, "Coefficient file or 'harmonic' (a_n = 1/n)");
  c_co->add_option("--w", w_spec, "Weight: log, log2, pow:a, const:c or table:path");
  c_co->add_option("--c-max", c_max, "Fail when C* exceeds this");
  c_co->add_flag("--emit-c", emit_c, "Include the mapped coefficients");
  c_co->add_option("--out", out, "Output file (default stdout)")->check(kWritable);

  std::string input_path, plot;
  int kmax = 6;
  std::int64_t grid = 512;
  auto* c_max_cmd = app.add_subcommand("maxima", "Dyadic block maxima on a uniform grid (CSV)");
  c_max_cmd->add_option("--plan", plan_path, "Plan file")->check(CLI::ExistingFile);
  c_max_cmd->add_option("--input", input_path, "Index sequence of a trigonometric system")->check(CLI::ExistingFile);
  c_max_cmd->add_option("--coeffs", coeff_spec, "Coefficient file or 'harmonic'");
  c_max_cmd->add_option("--kmax", kmax, "Last block")->default_val(6);
  c_max_cmd->add_option("--grid", grid, "Points per axis")->default_val(512);
  c_max_cmd->add_option("--out", out, "CSV file (default stdout)")->check(kWritable);
  c_max_cmd->add_option("--plot", plot, "SVG chart")->check(kWritable);

  std::int64_t n = 0;
  auto* c_w = app.add_subcommand("weight-check", "Scan a weight sequence");
  c_w->add_option("--w", w_spec, "Weight: log, log2, pow:a, const:c or table:path");
  c_w->add_option("--n", n, "Range N")->required();
  c_w->add_option("--c-max", c_max, "Fail when C(N) exceeds this");
  c_w->add_option("--out", out, "Output file (default stdout)")->check(kWritable);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_dts->parsed()) return cmd_dts(dts);
    if (c_map->parsed()) return cmd_crt_map(moduli, emit_path);
    if (c_eq->parsed()) return cmd_verify_equiv(moduli, seed, trials, out);
    if (c_red->parsed()) return cmd_reduce(red);
    if (c_chk->parsed()) return cmd_check_plan(plan_path, certificates, out);
    if (c_co->parsed()) return cmd_coeffs(plan_path, coeff_spec, w_spec, c_max, emit_c, out);
    if (c_max_cmd->parsed()) return cmd_maxima(plan_path, input_path, coeff_spec, kmax, grid, out, plot);
    if (c_w->parsed()) return cmd_weight_check(w_spec, n, c_max, out);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const JsonInputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
