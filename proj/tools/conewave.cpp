#include "conewave/runner.hpp"
#include "conewave/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

// Returns 0 and fills `out`, or the exit code for a missing or invalid file.
int load(const std::string& path, conewave::Scenario& out) {
  if (path.empty() || !std::filesystem::is_regular_file(path)) {
    std::cerr << "conewave: scenario file not found: " << (path.empty() ? "(none given)" : path) << '\n';
    return conewave::kExitNoScenario;
  }
  try {
    out = conewave::load_scenario(path);
  } catch (const conewave::ConfigurationError& e) {
    std::cerr << "conewave: invalid scenario: " << e.what()
              << '\n';
    return conewave::kExitInvalidScenario;
  } catch (const conewave::Error& e) {
    std::cerr << "conewave: " << e.what() << '\n';
    return conewave::kExitInvalidScenario;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightlike wavefront propagation for Lorentz-Finsler cone structures"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  bool oracle = false, refine = false, svg = false, serial = false;
  CLI::App* run = app.add_subcommand("run", "Propagate a scenario and write outputs");
  run->add_option("--scenario", scenario_path, "Scenario JSON file");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--oracle", oracle, "Compare against the earliest-arrival oracle");
  run->add_flag("--refine", refine, "Refine the final front to refinement.max_gap");
  run->add_flag("--svg", svg, "Write fronts.svg");
  run->add_flag("--serial", serial, "Disable OpenMP in the kernels");

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "Validate a scenario file");
  check->add_option("--scenario", check_path, "Scenario JSON file");

  CLI::App* families = app.add_subcommand("families", "List metric families and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return conewave::kExitUsage;
  }

  if (families->parsed()) {
    std::cout << conewave::describe_families();
    return 0;
  }
  if (check->parsed()) {
    conewave::Scenario s;
    if (const int rc = load(check_path, s)) return rc;
    std::cout << "ok: " << s.name << '\n';
    return 0;
  }

  conewave::Scenario s;
  if (const int rc = load(scenario_path, s)) return rc;
  if (oracle && !s.oracle) {
    std::cerr << "conewave: invalid scenario at /oracle: --oracle needs an oracle section\n";
    return conewave::kExitInvalidScenario;
  }
  if (refine && !s.max_gap) {
    std::cerr << "conewave: invalid scenario at /refinement: --refine needs refinement.max_gap\n";
    return conewave::kExitInvalidScenario;
  }
  conewave::RunOptions opts;
  opts.out_dir = out_dir;
  opts.oracle = oracle;
  opts.refine = refine;
  opts.svg = svg;
  opts.exec = serial ? conewave::Execution::serial : conewave::Execution::parallel;
  const conewave::RunOutcome outcome = conewave::run_scenario(s, opts);
  for (const auto& suite : outcome.suites)
    std::cout << (suite.pass ? "PASS " : "FAIL ") << suite.name << '\n';
  if (outcome.report.contains("error")) std::cerr << "conewave: " << outcome.report["error"]["message"].get<std::string>() << '\n';
  std::fprintf(stderr, "wall time %.3f s\n", outcome.wall_seconds);
  return outcome.exit_code;
}
