#pragma once

#include "conewave/scenario.hpp"
#include "conewave/wavefront.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace conewave {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool oracle = false;
  bool refine = false;
  bool svg = false;
  Execution exec = Execution::parallel;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  // Distance to the failure threshold; negative when failing.
  double margin = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

// Exit codes shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSuiteFailed = 1;
inline constexpr int kExitModuleError = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInvalidScenario = 65;
inline constexpr int kExitNoScenario = 66;

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<SuiteResult> suites;
  nlohmann::json report;
  WavefrontResult result;
  double wall_seconds = 0.0;
};

// Lift, propagate, trim and (optionally) refine and compare with the oracle,
// then write the requested outputs into opts.out_dir. Module errors are
// caught and serialized into the report with exit code 2.
RunOutcome run_scenario(const Scenario& s, const RunOptions& opts);

}  // namespace conewave
