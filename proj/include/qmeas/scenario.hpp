#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qmeas/json_io.hpp"

namespace qmeas {

/// Runtime knobs echoed into every report so each number in a report traces
/// back to an input.
struct RunOptions {
  std::uint64_t seed = 20260826;
  double eq_tol = default_tols().eq_tol;
  int max_dim = 16;
  std::string case_filter;  // substring on scenario ids; empty matches all
};

struct Report {
  std::string id;
  bool passed = false;
  Json body;  // deterministic given scenario + seed (no wall-clock fields)
};

/// Parse, validate and execute one scenario file. Throws ParseError /
/// ValidationError on malformed input; a failing check is reported, not
/// thrown.
Report run_scenario(const std::filesystem::path& path, const RunOptions& opts = {});

Report run_scenario_json(const Json& scenario, const std::string& fallback_id,
                         const RunOptions& opts = {});

/// Run every *.json scenario in a directory, aggregate sorted by scenario id.
Report run_suite(const std::filesystem::path& directory, const RunOptions& opts = {});

std::string render_text(const Report& report);

}  // namespace qmeas
