#include "qmeas/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qmeas/classical.hpp"
#include "qmeas/collapse.hpp"
#include "qmeas/equivalence.hpp"
#include "qmeas/valuation.hpp"

namespace qmeas {

namespace {

struct Context {
  RunOptions opts;
  Tolerances tols;
};

Context make_context(const Json& scenario, const RunOptions& opts) {
  Context ctx{opts, default_tols()};
  ctx.tols.eq_tol = opts.eq_tol;
  if (scenario.contains("tolerances")) {
    const Json& t = scenario.at("tolerances");
    if (t.contains("eq_tol")) ctx.tols.eq_tol = t.at("eq_tol").get<double>();
    if (t.contains("cluster_tol")) ctx.tols.cluster_tol = t.at("cluster_tol").get<double>();
    if (t.contains("prob_floor")) ctx.tols.prob_floor = t.at("prob_floor").get<double>();
  }
  if (scenario.contains("seed")) ctx.opts.seed = scenario.at("seed").get<std::uint64_t>();
  return ctx;
}

Json config_echo(const Context& ctx) {
  Json cfg;
  cfg["seed"] = ctx.opts.seed;
  cfg["eq_tol"] = ctx.tols.eq_tol;
  cfg["cluster_tol"] = ctx.tols.cluster_tol;
  cfg["prob_floor"] = ctx.tols.prob_floor;
  cfg["max_dim"] = ctx.opts.max_dim;
  return cfg;
}

SpectralDecomposition decode_observable(const Json& j, const Context& ctx) {
  const Matrix m = decode_square_matrix(j);
  if (m.rows() > ctx.opts.max_dim) {
    throw ValidationError("observable dimension exceeds --max-dim guard");
  }
  return eigendecompose(m, ctx.tols.cluster_tol, ctx.tols);
}

SpectrumFunction decode_function(const Json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "square") return SpectrumFunction::square();
    if (name == "identity") return SpectrumFunction::identity();
    throw ParseError("unknown builtin function '" + name + "'");
  }
  if (j.is_array()) {
    std::vector<std::pair<double, double>> table;
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError("function table entries must be [alpha, g(alpha)] pairs");
      }
      table.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return SpectrumFunction(std::move(table));
  }
  throw ParseError("function must be a builtin name or a table");
}

MeasurementBasis decode_basis(const Json& j, const SpectralDecomposition& sd) {
  if (j.is_string() && j.get<std::string>() == "canonical") {
    return MeasurementBasis::canonical(sd);
  }
  if (j.is_object() && j.contains("seed")) {
    return MeasurementBasis::random_rotation(sd, j.at("seed").get<std::uint64_t>());
  }
  if (j.is_number_unsigned()) {
    return MeasurementBasis::random_rotation(sd, j.get<std::uint64_t>());
  }
  throw ParseError("basis must be \"canonical\", a seed, or {\"seed\": n}");
}

DensityState decode_state(const Json& j, int dim, const Context& ctx) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "maximally_mixed") return maximally_mixed(dim);
    throw ParseError("unknown state name '" + name + "'");
  }
  if (j.is_object() && j.contains("pure")) {
    const Matrix col = decode_matrix(j.at("pure"));
    if (col.cols() != 1) throw ParseError("pure state must be a column of entries");
    return DensityState::pure(col.col(0));
  }
  return DensityState::from_matrix(decode_square_matrix(j), ctx.tols);
}

MeasurementEvent decode_event(const Json& j, const Context& ctx) {
  SpectralDecomposition sd = decode_observable(j.at("observable"), ctx);
  std::vector<double> outcomes = j.at("outcomes").get<std::vector<double>>();
  std::optional<MeasurementBasis> basis;
  if (j.contains("basis")) basis = decode_basis(j.at("basis"), sd);
  return MeasurementEvent{std::move(sd), std::move(outcomes), std::move(basis)};
}

// ---- kind: collapse ------------------------------------------------------

Json run_collapse(const Json& scenario, const Context& ctx, bool& passed) {
  const SpectralDecomposition sd = decode_observable(scenario.at("observable"), ctx);
  const std::string rule = scenario.at("rule").get<std::string>();
  const DensityState rho = decode_state(scenario.at("state"), sd.dim(), ctx);

  std::vector<double> outcomes;
  if (scenario.contains("outcomes")) {
    outcomes = scenario.at("outcomes").get<std::vector<double>>();
  }

  DensityState result = DensityState::null_state(sd.dim());
  double probability = 1.0;
  if (rule == "loss_of_outcome") {
    result = loss_of_outcome(rho, sd, ctx.tols);
  } else if (rule == "standard") {
    probability = born_probability(rho, outcomes, sd, ctx.tols);
    result = standard_collapse(rho, outcomes.at(0), sd, ctx.tols);
  } else if (rule == "subjective") {
    probability = born_probability(rho, outcomes, sd, ctx.tols);
    result = subjective_collapse(rho, outcomes, sd, ctx.tols);
  } else if (rule == "lueders_block") {
    probability = born_probability(rho, outcomes, sd, ctx.tols);
    result = lueders_block_collapse(rho, outcomes, sd, ctx.tols);
  } else if (rule == "contextual") {
    const MeasurementBasis basis = decode_basis(scenario.at("basis"), sd);
    probability = born_probability(rho, outcomes, sd, ctx.tols);
    result = contextual_collapse(rho, outcomes.at(0), sd, basis, ctx.tols);
  } else if (rule == "contextual_subjective") {
    const MeasurementBasis basis = decode_basis(scenario.at("basis"), sd);
    probability = born_probability(rho, outcomes, sd, ctx.tols);
    result = contextual_subjective_collapse(rho, outcomes, sd, basis, ctx.tols);
  } else {
    throw ParseError("unknown collapse rule '" + rule + "'");
  }

  Json body;
  body["rule"] = rule;
  body["probability"] = probability;
  body["result"] = encode_density(result);

  const Json& expected_json = scenario.at("expected");
  bool ok;
  if (expected_json.is_string() && expected_json.get<std::string>() == "null") {
    ok = result.is_null();
  } else if (expected_json.is_string() && expected_json.get<std::string>() == "input") {
    ok = !result.is_null() && result.approx_equal(rho, ctx.tols.eq_tol);
  } else {
    const Matrix expected = decode_square_matrix(expected_json);
    ok = !result.is_null() && matrix_close(result.matrix(), expected, ctx.tols.eq_tol);
    body["expected"] = encode_matrix(expected);
  }
  body["passed"] = ok;
  passed = ok;
  return body;
}

// ---- kind: post-processing ----------------------------------------------

Json run_post_processing(const Json& scenario, const Context& ctx, bool& passed) {
  const SpectralDecomposition sd = decode_observable(scenario.at("observable"), ctx);
  const SpectrumFunction g = decode_function(scenario.at("g"));
  const std::string sem = scenario.at("semantics").get<std::string>();
  const Semantics semantics =
      sem == "contextual" ? Semantics::contextual : Semantics::noncontextual;
  const std::string expect = scenario.at("expect").get<std::string>();
  if (expect != "dichotomy" && expect != "all_equal") {
    throw ParseError("post-processing expect must be dichotomy or all_equal");
  }

  PostProcessingOptions pp;
  pp.seed = ctx.opts.seed;
  const auto verdicts = check_post_processing(sd, g, semantics, pp, ctx.tols);
  const auto partition = preimage_partition(g, sd, ctx.tols);

  passed = true;
  Json cases = Json::array();
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    const std::size_t preimage_size = partition.blocks[i].second.size();
    const bool want_equal = expect == "all_equal" || preimage_size == 1;
    const bool case_ok = v.probability_equal && (v.update_equal == want_equal);
    Json c;
    c["beta"] = v.beta;
    c["preimage"] = partition.blocks[i].second;
    c["probability_equal"] = v.probability_equal;
    c["update_equal"] = v.update_equal;
    if (v.witness) {
      Json w;
      w["state"] = encode_density(v.witness->state);
      w["first"] = encode_density(v.witness->out_first);
      w["second"] = encode_density(v.witness->out_second);
      w["distance"] = v.witness->frobenius_distance;
      c["witness"] = std::move(w);
    }
    c["passed"] = case_ok;
    passed = passed && case_ok;
    cases.push_back(std::move(c));
  }
  Json body;
  body["semantics"] = sem;
  body["expect"] = expect;
  body["cases"] = std::move(cases);
  return body;
}

// ---- kind: ttt -----------------------------------------------------------

Json run_ttt(const Json& scenario, const Context& ctx, bool& passed) {
  const SpectralDecomposition sd = decode_observable(scenario.at("observable"), ctx);
  const SpectrumFunction g = decode_function(scenario.at("g"));
  Json body;
  if (scenario.value("expect_error", "") == "not_coarse_graining") {
    try {
      exhibit_ttt_inconsistency(sd, g, ctx.tols);
      passed = false;
      body["error"] = "none raised";
    } catch (const NotCoarseGraining&) {
      passed = true;
      body["error"] = "not_coarse_graining";
    }
    return body;
  }
  const TttReport report = exhibit_ttt_inconsistency(sd, g, ctx.tols);
  body["beta"] = report.beta;
  body["preimage"] = report.preimage;
  body["witness_state"] = encode_density(report.witness_state);
  body["standard_on_gA"] = encode_density(report.standard_on_gA);
  body["subjective_on_A"] = encode_density(report.subjective_on_A);
  body["trace_distance"] = report.trace_distance;
  body["frobenius_distance"] = report.frobenius_distance;
  passed = report.trace_distance > 1e-6;
  if (scenario.contains("expected_trace_distance")) {
    const double want = scenario.at("expected_trace_distance").get<double>();
    passed = passed && std::abs(report.trace_distance - want) <= 1e-9;
  }
  return body;
}

// ---- kind: valuation -----------------------------------------------------

Json run_valuation(const Json& scenario, const Context& ctx, bool& passed) {
  std::vector<SpectralDecomposition> members;
  for (const auto& m : scenario.at("members")) members.push_back(decode_observable(m, ctx));
  std::vector<FunctionalRelation> relations;
  if (scenario.contains("relations")) {
    for (const auto& r : scenario.at("relations")) {
      FunctionalRelation rel;
      rel.source = r.at(0).get<std::size_t>();
      rel.target = r.at(2).get<std::size_t>();
      for (const auto& pair : r.at(1)) {
        rel.table.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
      relations.push_back(std::move(rel));
    }
  }
  ObservableFamily family(std::move(members), std::move(relations), ctx.tols);
  family.discover_functional_relations(ctx.tols);

  const std::string expect = scenario.at("expect").get<std::string>();
  const auto result = search_valuation(family, 100'000'000, ctx.tols);

  Json body;
  body["members"] = family.members().size();
  body["relations_discovered"] = family.relations().size();
  if (const auto* v = std::get_if<Valuation>(&result)) {
    body["valuation"] = v->values;
    body["verified"] = verify_valuation(family, *v, ctx.tols);
    passed = expect == "exists" && body["verified"].get<bool>();
  } else {
    const auto& cert = std::get<NoValuationCertificate>(result);
    Json c;
    c["assignments_tried"] = cert.assignments_tried;
    c["relation_count"] = cert.relation_count;
    c["member_count"] = cert.member_count;
    body["no_valuation_certificate"] = std::move(c);
    passed = expect == "none";
  }
  return body;
}

// ---- kind: classical -----------------------------------------------------

ClassicalEvent make_classical_event(const ClassicalSystem& system, const Json& j) {
  return ClassicalEvent{system.observable(j.at("observable").get<std::string>()),
                        j.at("delta").get<std::vector<double>>()};
}

std::vector<double> value_range(const std::vector<double>& values) {
  std::vector<double> range = values;
  std::sort(range.begin(), range.end());
  range.erase(std::unique(range.begin(), range.end()), range.end());
  return range;
}

// Post-processing exhausted over a finite system: every g over range(A) and every
// Delta in range(g o A) must match the preimage event on A in probability
// and update, on all point masses plus the uniform state.
bool classical_post_processing_holds(const ClassicalSystem& system,
                                     const std::vector<double>& a_values,
                                     std::uint64_t* checked) {
  const std::size_t size = system.points.size();
  const auto range = value_range(a_values);
  const std::size_t k = range.size();
  std::vector<ClassicalState> probes;
  for (std::size_t i = 0; i < size; ++i) probes.push_back(ClassicalState::point_mass(size, i));
  probes.push_back(ClassicalState::uniform(size));

  std::uint64_t total_maps = 1;
  for (std::size_t i = 0; i < k; ++i) total_maps *= k;
  for (std::uint64_t code = 0; code < total_maps; ++code) {
    // Decode the map g: range(A) -> {0..k-1} from the base-k digits of code.
    std::vector<double> g_of(k);
    std::uint64_t rest = code;
    for (std::size_t i = 0; i < k; ++i) {
      g_of[i] = static_cast<double>(rest % k);
      rest /= k;
    }
    std::vector<double> b_values(size);
    for (std::size_t p = 0; p < size; ++p) {
      const auto it = std::find(range.begin(), range.end(), a_values[p]);
      b_values[p] = g_of[static_cast<std::size_t>(it - range.begin())];
    }
    const auto b_range = value_range(b_values);
    for (std::uint64_t mask = 1; mask < (1ull << b_range.size()); ++mask) {
      std::vector<double> delta_b, delta_a;
      for (std::size_t i = 0; i < b_range.size(); ++i) {
        if (mask & (1ull << i)) {
          delta_b.push_back(b_range[i]);
          for (std::size_t r = 0; r < k; ++r) {
            if (g_of[r] == b_range[i]) delta_a.push_back(range[r]);
          }
        }
      }
      const ClassicalEvent eb{b_values, delta_b};
      const ClassicalEvent ea{a_values, delta_a};
      for (const auto& mu : probes) {
        ++*checked;
        if (std::abs(classical_probability(mu, eb) - classical_probability(mu, ea)) > 1e-12) {
          return false;
        }
        if (!classical_update(mu, eb).approx_equal(classical_update(mu, ea))) return false;
      }
    }
  }
  return true;
}

Json run_classical(const Json& scenario, const Context& ctx, bool& passed) {
  ClassicalSystem system;
  system.points = scenario.at("points").get<std::vector<std::string>>();
  for (const auto& [name, values] : scenario.at("observables").items()) {
    system.observables[name] = values.get<std::vector<double>>();
  }
  system.validate();

  Json body;
  const std::string mode = scenario.value("mode", "pairs");
  if (mode == "pairs") {
    passed = true;
    Json cases = Json::array();
    for (const auto& pair : scenario.at("pairs")) {
      const ClassicalEvent e1 = make_classical_event(system, pair.at("e1"));
      const ClassicalEvent e2 = make_classical_event(system, pair.at("e2"));
      const bool same_preimage = preimage_indicator(e1, system.points.size()) ==
                                 preimage_indicator(e2, system.points.size());
      const bool ok = classical_equivalence_check(system, e1, e2);
      const bool want = pair.value("expect", true);
      Json c;
      c["same_preimage"] = same_preimage;
      c["updates_agree"] = ok;
      c["passed"] = (ok == want);
      passed = passed && (ok == want);
      cases.push_back(std::move(c));
    }
    body["cases"] = std::move(cases);
  } else if (mode == "exhaustive") {
    passed = true;
    std::uint64_t checked = 0;
    // Equivalent-event sweep across all observables and outcome subsets.
    for (const auto& [name1, v1] : system.observables) {
      for (const auto& [name2, v2] : system.observables) {
        const auto r1 = value_range(v1);
        const auto r2 = value_range(v2);
        for (std::uint64_t m1 = 1; m1 < (1ull << r1.size()); ++m1) {
          std::vector<double> d1;
          for (std::size_t i = 0; i < r1.size(); ++i) {
            if (m1 & (1ull << i)) d1.push_back(r1[i]);
          }
          for (std::uint64_t m2 = 1; m2 < (1ull << r2.size()); ++m2) {
            std::vector<double> d2;
            for (std::size_t i = 0; i < r2.size(); ++i) {
              if (m2 & (1ull << i)) d2.push_back(r2[i]);
            }
            ++checked;
            if (!classical_equivalence_check(system, ClassicalEvent{v1, d1},
                                             ClassicalEvent{v2, d2})) {
              passed = false;
            }
          }
        }
      }
      if (!classical_post_processing_holds(system, v1, &checked)) passed = false;
    }
    body["checked"] = checked;
    body["counterexamples"] = passed ? 0 : 1;
  } else {
    throw ParseError("classical mode must be pairs or exhaustive");
  }
  return body;
}

// ---- kind: equivalence ---------------------------------------------------

Json run_equivalence(const Json& scenario, const Context& ctx, bool& passed) {
  const std::string check = scenario.at("check").get<std::string>();
  Json body;
  body["check"] = check;
  bool result;
  if (check == "projector") {
    result = events_equivalent_projector(decode_event(scenario.at("e1"), ctx),
                                         decode_event(scenario.at("e2"), ctx), ctx.tols);
  } else if (check == "bases_commute") {
    const SpectralDecomposition sd = decode_observable(scenario.at("observable"), ctx);
    result = bases_commute(decode_basis(scenario.at("b1"), sd),
                           decode_basis(scenario.at("b2"), sd), sd, ctx.tols);
  } else if (check == "contextual_same_projector") {
    result = contextual_event_equal_implies_same_projector(
        decode_event(scenario.at("e1"), ctx), decode_event(scenario.at("e2"), ctx), ctx.tols);
  } else if (check == "update_maps") {
    auto kind_of = [](const std::string& s) {
      if (s == "standard") return UpdateKind::standard;
      if (s == "subjective") return UpdateKind::subjective;
      if (s == "lueders_block") return UpdateKind::lueders_block;
      if (s == "contextual") return UpdateKind::contextual;
      throw ParseError("unknown update kind '" + s + "'");
    };
    const UpdateMap m1 = to_update_map(kind_of(scenario.at("kind1").get<std::string>()),
                                       decode_event(scenario.at("e1"), ctx), ctx.tols);
    const UpdateMap m2 = to_update_map(kind_of(scenario.at("kind2").get<std::string>()),
                                       decode_event(scenario.at("e2"), ctx), ctx.tols);
    result = update_maps_equal(m1, m2, ctx.tols.eq_tol);
  } else {
    throw ParseError("unknown equivalence check '" + check + "'");
  }
  const bool want = scenario.at("expect").get<bool>();
  body["result"] = result;
  body["expect"] = want;
  passed = (result == want);
  return body;
}

}  // namespace

Report run_scenario_json(const Json& scenario, const std::string& fallback_id,
                         const RunOptions& opts) {
  if (!scenario.is_object() || !scenario.contains("kind")) {
    throw ParseError("scenario must be an object with a \"kind\" field");
  }
  const Context ctx = make_context(scenario, opts);
  const std::string kind = scenario.at("kind").get<std::string>();
  const std::string id = scenario.value("id", fallback_id);

  Report report;
  report.id = id;
  bool passed = false;
  Json body;
  if (kind == "collapse") {
    body = run_collapse(scenario, ctx, passed);
  } else if (kind == "post-processing") {
    body = run_post_processing(scenario, ctx, passed);
  } else if (kind == "ttt") {
    body = run_ttt(scenario, ctx, passed);
  } else if (kind == "valuation") {
    body = run_valuation(scenario, ctx, passed);
  } else if (kind == "classical") {
    body = run_classical(scenario, ctx, passed);
  } else if (kind == "equivalence") {
    body = run_equivalence(scenario, ctx, passed);
  } else {
    throw ParseError("unknown scenario kind '" + kind + "'");
  }

  report.passed = passed;
  report.body["scenario"] = id;
  report.body["kind"] = kind;
  report.body["passed"] = passed;
  report.body["detail"] = std::move(body);
  report.body["config"] = config_echo(ctx);
  return report;
}

Report run_scenario(const std::filesystem::path& path, const RunOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  Json scenario;
  try {
    scenario = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return run_scenario_json(scenario, path.stem().string(), opts);
}

Report run_suite(const std::filesystem::path& directory, const RunOptions& opts) {
  if (!std::filesystem::is_directory(directory)) {
    throw ParseError("suite path is not a directory: " + directory.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  Report aggregate;
  aggregate.id = directory.filename().string();
  aggregate.passed = true;
  Json reports = Json::array();
  std::size_t ran = 0;
  for (const auto& file : files) {
    const std::string stem = file.stem().string();
    if (!opts.case_filter.empty() && stem.find(opts.case_filter) == std::string::npos) {
      continue;
    }
    Report r = run_scenario(file, opts);
    aggregate.passed = aggregate.passed && r.passed;
    reports.push_back(std::move(r.body));
    ++ran;
  }
  aggregate.body["suite"] = aggregate.id;
  aggregate.body["scenarios"] = ran;
  aggregate.body["passed"] = aggregate.passed;
  aggregate.body["reports"] = std::move(reports);
  return aggregate;
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  if (report.body.contains("suite")) {
    out << "suite " << report.id << ": " << report.body["scenarios"].get<std::size_t>()
        << " scenario(s), " << (report.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& r : report.body["reports"]) {
      out << "  [" << (r["passed"].get<bool>() ? "pass" : "FAIL") << "] "
          << r["scenario"].get<std::string>() << " (" << r["kind"].get<std::string>() << ")\n";
    }
  } else {
    out << "scenario " << report.id << " (" << report.body["kind"].get<std::string>()
        << "): " << (report.passed ? "PASS" : "FAIL") << "\n";
  }
  return out.str();
}

}  // namespace qmeas
