#include "trigeq/json_io.hpp"

#include <fstream>
#include <sstream>

#include "trigeq/arith.hpp"

namespace trigeq {

namespace {

// Line and column of a byte offset (1-based).
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw JsonInputError(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) throw JsonInputError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw JsonInputError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

double as_double(const Json& j, const char* what) {
  if (!j.is_number()) throw JsonInputError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<std::int64_t> as_int_list(const Json& j, const char* what) {
  if (!j.is_array()) throw JsonInputError(std::string(what) + " must be a list of integers");
  std::vector<std::int64_t> out;
  for (const auto& v : j) out.push_back(as_int(v, what));
  return out;
}

template <class T>
void expect_equal(const T& got, const T& want, const std::string& what) {
  if (!(got == want)) throw JsonInputError("plan check failed: " + what + " differs from the rebuilt value");
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte);
    throw JsonInputError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col), line,
                         col);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonInputError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json_text(buf.str());
  } catch (const JsonInputError& e) {
    throw JsonInputError(path + ": " + e.what(), e.line(), e.column());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// ---------------------------------------------------------------- scalars

Json wide_to_json(Wide v) {
  if (fits_int64(v)) return Json(static_cast<std::int64_t>(v));
  return Json(to_string(v));
}

Wide wide_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    try {
      return parse_wide(j.get<std::string>());
    } catch (const std::exception&) {
      throw JsonInputError("bad integer string \"" + j.get<std::string>() + "\"");
    }
  }
  throw JsonInputError("expected an integer or a decimal string");
}

Json complex_to_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

std::complex<double> complex_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {as_double(j[0], "re"), as_double(j[1], "im")};
  if (j.is_object()) return {as_double(field(j, "re"), "re"), as_double(field(j, "im"), "im")};
  throw JsonInputError("expected a number, [re, im] or {re, im}");
}

// ---------------------------------------------------------------- polynomials

Json poly_to_json(const TrigPolynomial& f) {
  Json terms = Json::array();
  for (const auto& [freq, c] : f.terms()) {
    terms.push_back(Json{{"freq", freq}, {"re", c.real()}, {"im", c.imag()}});
  }
  return Json{{"dim", f.dim()}, {"terms", std::move(terms)}};
}

TrigPolynomial poly_from_json(const Json& j) {
  const auto dim = as_int(field(j, "dim"), "dim");
  if (dim < 1) throw JsonInputError("dim must be at least 1");
  TrigPolynomial f(static_cast<std::size_t>(dim));
  const auto& terms = field(j, "terms");
  if (!terms.is_array()) throw JsonInputError("terms must be a list");
  for (const auto& t : terms) {
    const auto freq = as_int_list(field(t, "freq"), "freq");
    if (freq.size() != static_cast<std::size_t>(dim)) throw JsonInputError("term frequency of the wrong dimension");
    f.add(freq, {as_double(field(t, "re"), "re"), as_double(field(t, "im"), "im")});
  }
  return f;
}

// ---------------------------------------------------------------- distributions

Json distribution_to_json(const Distribution& d) {
  Json out = Json::array();
  for (const auto& atom : d.atoms) {
    Json values = Json::array();
    for (const auto& v : atom.values) {
      if (v.is_root_of_unity()) {
        values.push_back(Json{{"num", v.phase().num()}, {"mod", v.phase().den()}});
      } else {
        values.push_back(complex_to_json(v.value()));
      }
    }
    out.push_back(Json{{"values", std::move(values)},
                       {"measure", Json{{"num", atom.measure.numerator()}, {"den", atom.measure.denominator()}}}});
  }
  return out;
}

Distribution distribution_from_json(const Json& j) {
  if (!j.is_array()) throw JsonInputError("distribution must be a list of atoms");
  Distribution d;
  for (const auto& a : j) {
    DistributionAtom atom;
    const auto& values = field(a, "values");
    if (!values.is_array()) throw JsonInputError("values must be a list");
    for (const auto& v : values) {
      if (v.is_object() && v.contains("num")) {
        const auto mod = as_int(field(v, "mod"), "mod");
        if (mod < 1) throw JsonInputError("mod must be positive");
        atom.values.emplace_back(Phase(as_int(field(v, "num"), "num"), mod));
      } else {
        atom.values.emplace_back(complex_from_json(v));
      }
    }
    const auto& m = field(a, "measure");
    const auto den = as_int(field(m, "den"), "den");
    if (den < 1) throw JsonInputError("measure denominator must be positive");
    atom.measure = Rational(as_int(field(m, "num"), "num"), den);
    d.atoms.push_back(std::move(atom));
  }
  return d;
}

// ---------------------------------------------------------------- cell maps

Json cell_map_to_json(const CoprimeModuli& moduli) {
  const auto theta = build_theta(moduli);
  Json out = Json::array();
  for (std::int64_t c = 0; c < theta.source().cell_count(); ++c) {
    out.push_back(Json{{"from", theta.source().cell_of(c)}, {"to", theta(c)}});
  }
  return out;
}

MPCellMap cell_map_from_json(const Json& j, const CoprimeModuli& moduli) {
  if (!j.is_array()) throw JsonInputError("cell map must be a list of {from, to}");
  const CellPartition source(moduli.moduli());
  const CellPartition target({moduli.product()});
  if (static_cast<std::int64_t>(j.size()) != source.cell_count()) {
    throw JsonInputError("cell map lists " + std::to_string(j.size()) + " cells, expected " +
                         std::to_string(source.cell_count()));
  }
  std::vector<std::int64_t> image(static_cast<std::size_t>(source.cell_count()), -1);
  for (const auto& e : j) {
    const auto from = as_int_list(field(e, "from"), "from");
    if (from.size() != moduli.dim()) throw JsonInputError("cell of the wrong dimension");
    for (std::size_t i = 0; i < from.size(); ++i) {
      if (from[i] < 0 || from[i] >= moduli[i]) throw JsonInputError("cell index out of range");
    }
    const auto to = as_int(field(e, "to"), "to");
    if (to != crt_tau_bar(moduli, from)) throw JsonInputError("cell map entry disagrees with the CRT map");
    auto& slot = image[static_cast<std::size_t>(source.index_of(from))];
    if (slot != -1) throw JsonInputError("cell listed twice");
    slot = to;
  }
  return {source, target, std::move(image)};
}

// ---------------------------------------------------------------- inputs

Json input_to_json(const MultiIndexSequence& input) {
  Json out{{"mode", to_string(input.mode())}, {"dim", input.dim()}};
  if (input.mode() == ReductionMode::RC) {
    out["indices"] = input.indices();
  } else {
    Json polys = Json::array();
    for (const auto& p : input.polys()) polys.push_back(poly_to_json(p));
    out["polys"] = std::move(polys);
  }
  return out;
}

MultiIndexSequence input_from_json(const Json& j) {
  try {
    if (j.is_array()) {
      if (j.empty()) throw JsonInputError("input lists no indices");
      std::vector<Frequency> idx;
      for (const auto& v : j) idx.push_back(as_int_list(v, "index vector"));
      const auto dim = idx.front().size();
      return MultiIndexSequence::rc(dim, std::move(idx));
    }
    const auto mode = j.contains("mode") ? parse_mode(field(j, "mode").get<std::string>()) : ReductionMode::RC;
    const auto dim = as_int(field(j, "dim"), "dim");
    if (dim < 1) throw JsonInputError("dim must be at least 1");
    if (mode == ReductionMode::RC) {
      std::vector<Frequency> idx;
      for (const auto& v : field(j, "indices")) idx.push_back(as_int_list(v, "index vector"));
      return MultiIndexSequence::rc(static_cast<std::size_t>(dim), std::move(idx));
    }
    std::vector<TrigPolynomial> polys;
    for (const auto& p : field(j, "polys")) polys.push_back(poly_from_json(p));
    return MultiIndexSequence::src(static_cast<std::size_t>(dim), std::move(polys));
  } catch (const nlohmann::json::exception& e) {
    throw JsonInputError(std::string("bad input sequence: ") + e.what());
  }
}

std::vector<std::complex<double>> coefficients_from_json(const Json& j) {
  const Json& list = j.is_object() ? field(j, "a") : j;
  if (!list.is_array()) throw JsonInputError("coefficients must be a list");
  std::vector<std::complex<double>> out;
  for (const auto& v : list) out.push_back(complex_from_json(v));
  return out;
}

Json coefficients_to_json(std::span<const std::complex<double>> a) {
  Json list = Json::array();
  for (auto z : a) list.push_back(complex_to_json(z));
  return Json{{"a", std::move(list)}};
}

// ---------------------------------------------------------------- plans

Json plan_to_json(const ReductionPlan& plan, bool compact) {
  Json blocks = Json::array();
  for (const auto& b : plan.blocks()) {
    Json members = Json::array();
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      const auto& m = b.members[i];
      Json jm{{"n", m.n}};
      if (plan.mode() == ReductionMode::RC) jm["n_vec"] = m.components.front().source;
      Json comps = Json::array();
      for (const auto& c : m.components) {
        comps.push_back(Json{{"source", c.source},
                             {"residue", c.residue},
                             {"weight", complex_to_json(c.weight)},
                             {"disc_error", c.disc_error},
                             {"trunc_error", c.trunc_error}});
      }
      jm["components"] = std::move(comps);
      jm["disc_error"] = m.disc_error;
      jm["trunc_error"] = m.trunc_error;
      jm["norm_sq"] = m.norm_sq;
      if (!compact) {
        Json terms = Json::array();
        plan.for_each_term(m.n, [&](std::int64_t, const PlanTerm& t) {
          terms.push_back(Json{{"m", wide_to_json(t.frequency)}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
        });
        jm["terms"] = std::move(terms);
      }
      members.push_back(std::move(jm));
    }
    blocks.push_back(Json{{"k", b.k},
                          {"moduli", b.moduli.moduli()},
                          {"modulus", b.modulus()},
                          {"shift", wide_to_json(b.shift)},
                          {"window", Json{{"lo", b.window.lo}, {"hi", b.window.hi}}},
                          {"disc_target", b.disc_target},
                          {"eps", b.eps},
                          {"eps_disc", b.eps_disc},
                          {"eps_trunc", b.eps_trunc},
                          {"members", std::move(members)}});
  }
  return Json{{"mode", to_string(plan.mode())},
              {"dim", plan.dim()},
              {"n_max", plan.n_max()},
              {"compact", compact},
              {"blocks", std::move(blocks)},
              {"offsets", plan.offsets()}};
}

ReductionPlan plan_from_json(const Json& j) {
  try {
    const auto mode = parse_mode(field(j, "mode").get<std::string>());
    const auto dim = as_int(field(j, "dim"), "dim");
    const auto n_max = as_int(field(j, "n_max"), "n_max");
    if (dim < 1) throw JsonInputError("dim must be at least 1");
    std::vector<BlockPlan> blocks;
    for (const auto& jb : field(j, "blocks")) {
      BlockPlan b;
      b.k = static_cast<int>(as_int(field(jb, "k"), "k"));
      const std::string tag = "block " + std::to_string(b.k);
      b.moduli = CoprimeModuli(as_int_list(field(jb, "moduli"), "moduli"));
      if (b.moduli.dim() != static_cast<std::size_t>(dim)) throw JsonInputError(tag + ": moduli of the wrong dimension");
      b.shift = wide_from_json(field(jb, "shift"));
      for (const auto& jm : field(jb, "members")) {
        PlanMember m;
        m.n = as_int(field(jm, "n"), "n");
        for (const auto& jc : field(jm, "components")) {
          PlanComponent c;
          c.source = as_int_list(field(jc, "source"), "source");
          c.weight = complex_from_json(field(jc, "weight"));
          m.components.push_back(std::move(c));
        }
        if (m.components.empty()) throw JsonInputError(tag + ": member without components");
        b.members.push_back(std::move(m));
      }
      finish_block(b, mode);

      expect_equal(as_int(field(jb, "modulus"), "modulus"), b.modulus(), tag + " modulus");
      const auto& jw = field(jb, "window");
      expect_equal(TruncationWindow{as_int(field(jw, "lo"), "lo"), as_int(field(jw, "hi"), "hi")}, b.window,
                   tag + " window");
      expect_equal(as_double(field(jb, "disc_target"), "disc_target"), b.disc_target, tag + " disc_target");
      expect_equal(as_double(field(jb, "eps"), "eps"), b.eps, tag + " eps");
      expect_equal(as_double(field(jb, "eps_disc"), "eps_disc"), b.eps_disc, tag + " eps_disc");
      expect_equal(as_double(field(jb, "eps_trunc"), "eps_trunc"), b.eps_trunc, tag + " eps_trunc");
      const auto& jmembers = field(jb, "members");
      for (std::size_t i = 0; i < b.members.size(); ++i) {
        const auto& m = b.members[i];
        const auto& jm = jmembers[i];
        const std::string mt = tag + " member " + std::to_string(m.n);
        if (mode == ReductionMode::RC && jm.contains("n_vec")) {
          expect_equal(as_int_list(jm["n_vec"], "n_vec"), m.components.front().source, mt + " n_vec");
        }
        expect_equal(as_double(field(jm, "disc_error"), "disc_error"), m.disc_error, mt + " disc_error");
        expect_equal(as_double(field(jm, "trunc_error"), "trunc_error"), m.trunc_error, mt + " trunc_error");
        expect_equal(as_double(field(jm, "norm_sq"), "norm_sq"), m.norm_sq, mt + " norm_sq");
        const auto& jcomps = field(jm, "components");
        for (std::size_t c = 0; c < m.components.size(); ++c) {
          const auto& pc = m.components[c];
          expect_equal(as_int(field(jcomps[c], "residue"), "residue"), pc.residue, mt + " residue");
          expect_equal(as_double(field(jcomps[c], "disc_error"), "disc_error"), pc.disc_error, mt + " component disc_error");
          expect_equal(as_double(field(jcomps[c], "trunc_error"), "trunc_error"), pc.trunc_error,
                       mt + " component trunc_error");
        }
      }
      blocks.push_back(std::move(b));
    }

    {
      auto replay = blocks;
      for (auto& b : replay) b.shift = 0;
      assign_shifts(replay);
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (replay[k].shift != blocks[k].shift) {
          throw JsonInputError("plan check failed: block " + std::to_string(k) + " shift differs from the rebuilt value");
        }
      }
    }
    ReductionPlan plan(mode, static_cast<std::size_t>(dim), n_max, std::move(blocks));
    expect_equal(as_int_list(field(j, "offsets"), "offsets"), plan.offsets(), "offsets");

    const auto& jblocks = field(j, "blocks");
    for (std::size_t k = 0; k < plan.blocks().size(); ++k) {
      const auto& jmembers = jblocks[k]["members"];
      for (std::size_t i = 0; i < jmembers.size(); ++i) {
        const auto& jm = jmembers[i];
        if (!jm.contains("terms")) continue;
        const auto& terms = jm["terms"];
        const auto n = plan.blocks()[k].members[i].n;
        const std::string mt = "slot " + std::to_string(n);
        if (!terms.is_array() || static_cast<std::int64_t>(terms.size()) != plan.offset(n + 1) - plan.offset(n)) {
          throw JsonInputError("plan check failed: " + mt + " lists the wrong number of terms");
        }
        std::size_t at = 0;
        plan.for_each_term(n, [&](std::int64_t s, const PlanTerm& t) {
          const auto& jt = terms[at++];
          const std::string st = mt + " term " + std::to_string(s);
          if (wide_from_json(field(jt, "m")) != t.frequency) {
            throw JsonInputError("plan check failed: " + st + " frequency differs from the rebuilt value");
          }
          expect_equal(std::complex<double>(as_double(field(jt, "re"), "re"), as_double(field(jt, "im"), "im")), t.coeff,
                       st + " coefficient");
        });
      }
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw JsonInputError(std::string("bad plan: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw JsonInputError(std::string("bad plan: ") + e.what());
  } catch (const std::domain_error& e) {
    throw JsonInputError(std::string("bad plan: ") + e.what());
  }
}

// ---------------------------------------------------------------- reports

Json structure_report_to_json(const PlanStructureReport& r) {
  return Json{{"passed", r.passed()},
              {"slots", r.slots},
              {"total_terms", r.total_terms},
              {"offset_violations", r.offset_violations},
              {"growth_violations", r.growth_violations},
              {"norm_violations", r.norm_violations},
              {"residue_collisions", r.residue_collisions},
              {"overlap_violations", r.overlap_violations},
              {"error_violations", r.error_violations},
              {"worst_slot_norm_sq", r.worst_slot_norm_sq},
              {"norm_tolerance", 1e-12},
              {"worst_scaled_error", r.worst_scaled_error},
              {"error_constant", kBlockErrorConstant},
              {"progression_tests", r.progression_tests},
              {"norms_summed", r.norms_summed},
              {"exhaustive", r.exhaustive},
              {"messages", r.messages}};
}

Json weight_report_to_json(const WeightCheckReport& r) {
  Json env = Json::array();
  for (const auto& e : r.envelopes) env.push_back(Json{{"n", e.n}, {"over_log", e.over_log}, {"over_log2", e.over_log2}});
  Json sums = Json::array();
  for (const auto& c : r.reciprocal_sums) sums.push_back(Json{{"n", c.n}, {"partial_sum", c.partial_sum}});
  return Json{{"weight", r.name},
              {"n_max", r.n_max},
              {"monotonicity_violations", r.monotonicity_violations},
              {"first_violations", r.first_violations},
              {"increases", r.increases},
              {"doubling_constant", r.doubling_constant},
              {"doubling_argmax", r.doubling_argmax},
              {"doubling_constant_half_range", r.doubling_constant_half_range},
              {"doubling_growth_tolerance", kDoublingGrowthTolerance},
              {"doubling_flagged", r.doubling_flagged},
              {"envelopes", std::move(env)},
              {"reciprocal_sums", std::move(sums)},
              {"notes", r.notes}};
}

Json certificate_to_json(const BlockCertificate& c) {
  Json members = Json::array();
  for (const auto& m : c.members) {
    members.push_back(Json{{"n", m.n},
                           {"sources", m.sources},
                           {"residues", m.residues},
                           {"disc_error", m.disc_error},
                           {"trunc_error", m.trunc_error},
                           {"total", m.total}});
  }
  return Json{{"k", c.k},
              {"moduli", c.moduli},
              {"eps", c.eps},
              {"eps_disc", c.eps_disc},
              {"eps_trunc", c.eps_trunc},
              {"bound", c.bound},
              {"cells_checked", c.cells_checked},
              {"correspondence_exhaustive", c.correspondence_exhaustive},
              {"passed", c.passed},
              {"members", std::move(members)}};
}

}  // namespace trigeq
