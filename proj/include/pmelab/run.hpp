#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmelab/error.hpp"
#include "pmelab/scenario.hpp"

namespace pmelab {

inline constexpr const char* kVersion = "1.0.0";

struct RunOptions {
  std::string out;                     // empty: the scenario's output, else runs/<name>
  std::optional<std::uint64_t> seed;   // overrides the scenario seed
  int jobs = 1;
  bool write = true;                   // write report, manifest and samples
};

struct RunResult {
  Json report;    // deterministic: no timings, no paths
  Json manifest;  // hash, versions, verdicts, timings, artifacts
  std::string out_dir;
  bool all_pass = true;
  /// C* of calibrated estimate checks at the finest level, by check name.
  std::vector<std::pair<std::string, double>> calibrated;
};

/// Certifies the geometry, solves once per resolution, then runs the checks.
/// Checks that throw are recorded as failed with the error; certification and solver errors propagate.
RunResult run_scenario(const Scenario& sc, const RunOptions& opts = {});

/// Writes the golden file with the calibrated C* values; refuses to overwrite unless force.
std::string update_golden(const Scenario& sc, bool force, int jobs = 1);

/// Emits json | csv | plotdata next to the manifest (or into out_dir); throws MissingArtifact.
std::vector<std::string> write_report(const std::string& manifest_path, const std::string& format,
                                      const std::string& out_dir = "");

/// 0 pass, 1 verdict failure, 2 config error, 3 runtime error.
int exit_code_for(const Error& e);

}  // namespace pmelab
