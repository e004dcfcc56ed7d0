#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qmeas/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

void write_json(const qmeas::Report& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw qmeas::ParseError("cannot write JSON report to " + path);
  out << report.body.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-event semantics checker: collapse rules, "
               "post-processing equivalence and valuation search on scenario files"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand name

  std::string json_path;
  qmeas::RunOptions opts;

  app.add_option("--json", json_path, "Write the machine-readable report to this path");
  app.add_option("--seed", opts.seed, "Seed for all randomized checks");
  app.add_option("--tol", opts.eq_tol, "Override the matrix-equality tolerance (per dim)");
  app.add_option("--max-dim", opts.max_dim, "Reject observables larger than this dimension");
  app.add_option("--cases", opts.case_filter, "Only run scenarios whose id contains this string");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a single scenario file");
  run->add_option("file", scenario_path, "Scenario JSON file")->required();

  std::string suite_dir;
  auto* suite = app.add_subcommand("suite", "Run every scenario in a directory");
  suite->add_option("directory", suite_dir, "Directory of scenario JSON files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    qmeas::Report report =
        run->parsed() ? qmeas::run_scenario(scenario_path, opts) : qmeas::run_suite(suite_dir, opts);
    std::cout << qmeas::render_text(report);
    if (!json_path.empty()) write_json(report, json_path);
    return report.passed ? kExitPass : kExitCheckFailed;
  } catch (const qmeas::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qmeas::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qmeas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}
