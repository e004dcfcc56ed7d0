#include <doctest.h>

#include <filesystem>
#include <string>

#include "qmeas/errors.hpp"
#include "qmeas/scenario.hpp"

using namespace qmeas;

namespace {

std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(QMEAS_SCENARIO_DIR) / name;
}

std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(QMEAS_TEST_DATA_DIR) / name;
}

}  // namespace

TEST_CASE("bundled collapse scenario runs and passes") {
  const Report r = run_scenario(scenario_path("collapse_subjective_full_spectrum.json"));
  CHECK(r.passed);
  CHECK(r.id == "collapse_subjective_full_spectrum");
  CHECK(r.body["kind"] == "collapse");
  CHECK(r.body["detail"]["probability"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("a failing check is reported, not thrown") {
  // A coarse-graining with expect=all_equal under noncontextual semantics
  // must fail on the merged spectral point, without raising.
  const Report r = run_scenario(data_path("failing_assertion.json"));
  CHECK_FALSE(r.passed);
  CHECK(r.body["passed"] == false);
}

TEST_CASE("malformed input throws instead of reporting") {
  CHECK_THROWS_AS(run_scenario(data_path("bad_matrix.json")), ValidationError);
  CHECK_THROWS_AS(run_scenario(data_path("no_such_file.json")), ParseError);
  CHECK_THROWS_AS(run_scenario_json(Json{{"kind", "frobnicate"}}, "x"), ParseError);
  CHECK_THROWS_AS(run_scenario_json(Json::array(), "x"), ParseError);
}

TEST_CASE("scenario reports are deterministic") {
  const RunOptions opts;
  const Report a = run_scenario(scenario_path("postprocessing_contextual.json"), opts);
  const Report b = run_scenario(scenario_path("postprocessing_contextual.json"), opts);
  CHECK(a.body.dump() == b.body.dump());
}

TEST_CASE("suite aggregates sorted scenarios and honors the case filter") {
  RunOptions opts;
  opts.case_filter = "collapse";
  const Report r = run_suite(QMEAS_SCENARIO_DIR, opts);
  CHECK(r.passed);
  const auto& reports = r.body["reports"];
  CHECK(r.body["scenarios"].get<std::size_t>() == reports.size());
  CHECK(reports.size() >= 5);
  std::string prev;
  for (const auto& entry : reports) {
    const std::string id = entry["scenario"].get<std::string>();
    CHECK(id.find("collapse") != std::string::npos);
    CHECK(prev < id);  // directory order is sorted, ids are unique
    prev = id;
  }
}

TEST_CASE("config echo carries the effective seed and tolerances") {
  RunOptions opts;
  opts.seed = 7;
  opts.eq_tol = 1e-8;
  const Report r = run_scenario(scenario_path("collapse_loss_of_outcome.json"), opts);
  CHECK(r.body["config"]["seed"].get<std::uint64_t>() == 7);
  CHECK(r.body["config"]["eq_tol"].get<double>() == doctest::Approx(1e-8));
}

TEST_CASE("text rendering names every scenario with a pass/fail tag") {
  RunOptions opts;
  opts.case_filter = "ttt";
  const Report r = run_suite(QMEAS_SCENARIO_DIR, opts);
  const std::string text = render_text(r);
  CHECK(text.find("ttt_square") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
}
