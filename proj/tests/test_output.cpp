#include "conewave/output.hpp"
#include "conewave/runner.hpp"
#include "conewave/scenario.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace conewave;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("doubles round-trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  testing::Gen gen(61);
  for (int k = 0; k < 100; ++k) {
    const double v = gen.uniform(-1e3, 1e3);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv and svg writers are deterministic") {
  const MetricModel m = testing::wind(0.2);
  const std::vector<double> grid = {0.2, 0.4};
  const WavefrontResult a = propagate_boundary(m, {testing::circle(20, 0.5)}, grid);
  const WavefrontResult b = propagate_boundary(m, {testing::circle(20, 0.5)}, grid);
  CHECK(fronts_csv(a) == fronts_csv(b));
  CHECK(traces_csv(a) == traces_csv(b));
  CHECK(seeds_csv(m, a) == seeds_csv(m, b));
  const std::string svg = front_svg(a, data_view(a));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg == front_svg(b, data_view(b)));

  // One header plus a row per point of every propagated slice.
  const std::string csv = fronts_csv(a);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 20);
}

TEST_CASE("running a scenario writes the requested files") {
  const Scenario s = load_scenario(std::string(CONEWAVE_SCENARIO_DIR) + "/constant_wind.json");
  const auto dir = std::filesystem::temp_directory_path() / "conewave_test_output";
  std::filesystem::remove_all(dir);
  RunOptions o;
  o.out_dir = dir;
  const RunOutcome r = run_scenario(s, o);
  CHECK(r.exit_code == kExitOk);
  for (const char* f : {"fronts.csv", "traces.csv", "seeds.csv", "fronts.svg", "report.json"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(r.report["scenario"] == "constant_wind");
  for (const auto& suite : r.report["suites"]) CHECK(suite["pass"] == true);

  const std::string first = slurp(dir / "report.json");
  const RunOutcome again = run_scenario(s, o);
  CHECK(slurp(dir / "report.json") == first);
  std::filesystem::remove_all(dir);
}
