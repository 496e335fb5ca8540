#include "conewave/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace conewave;

namespace {

const std::string kCircle =
    "[[1,0],[0.7071,0.7071],[0,1],[-0.7071,0.7071],[-1,0],[-0.7071,-0.7071],[0,-1],[0.7071,-0.7071]]";

std::string doc(const std::string& metric, const std::string& grid = "[0.5, 1.0]", const std::string& extra = "") {
  return R"({"name": "t", "metric": )" + metric + R"(, "initial_set": )" + kCircle + R"(, "t_grid": )" + grid +
         extra + "}";
}

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigurationError& e) {
    return e.field();
  }
  return "(accepted)";
}

}  // namespace

TEST_CASE("defaults and resampling") {
  const Scenario s = parse_scenario(doc(R"({"family": "minkowski"})"));
  CHECK(s.name == "t");
  CHECK(s.family == Family::minkowski);
  CHECK(s.dt_step == 1e-3);
  CHECK_FALSE(s.oracle);
  CHECK_FALSE(s.max_gap);
  REQUIRE(s.initial_set.size() == 1);
  CHECK(s.initial_set[0].size() == kResampledVertices);
  CHECK(s.outputs == std::vector<OutputKind>{OutputKind::fronts_csv, OutputKind::report_json});
}

TEST_CASE("invalid fields are reported by JSON pointer") {
  CHECK(field_of(doc(R"({"family": "quartic", "params": {"lambda": 0.2}})")) == "/metric/params/lambda");
  CHECK(field_of(doc(R"({"family": "minkowski"})", "[0.5, 0.25]")) == "/t_grid");
  CHECK(field_of(doc(R"({"family": "minkowski"})", "[0.0]")) == "/t_grid");
  CHECK(field_of(doc(R"({"family": "warp"})")) == "/metric/family");
  CHECK(field_of(doc(R"({"family": "minkowski", "params": {"c": -1}})")).rfind("/metric/params/c", 0) == 0);
  CHECK(field_of(doc(R"({"family": "zermelo", "params": {"h": [[1, 0.2], [0.3, 1]]}})")).rfind("/metric/params/h", 0) == 0);
  CHECK(field_of(doc(R"({"family": "minkowski"})", "[1]", R"(, "dt_step": 0)")) == "/dt_step");
  CHECK(field_of(doc(R"({"family": "minkowski"})", "[1]", R"(, "outputs": ["pdf"])")) == "/outputs/0");
  CHECK(field_of(doc(R"({"family": "minkowski"})", "[1]", R"(, "colour": 1)")) == "/colour");
  CHECK(field_of(doc(R"({"family": "minkowski"})", "[1]",
                     R"(, "oracle": {"dx": 0.1, "dt_layer": 0.1, "extents": [[1, -1], [-1, 1]]})")) ==
        "/oracle/extents/0");
  CHECK(field_of(R"({"name": "t", "metric": {"family": "minkowski"}, "initial_set": [[0,0],[1,1],[1,0],[0,1]], "t_grid": [1]})") ==
        "/initial_set");
  CHECK(field_of("{not json") == "");
}

TEST_CASE("bundled scenarios load") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(CONEWAVE_SCENARIO_DIR)) {
    if (e.path().extension() != ".json") continue;
    const Scenario s = load_scenario(e.path());
    CHECK(!s.initial_set.empty());
    CHECK(s.name == e.path().stem().string());
    ++n;
  }
  CHECK(n >= 7);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), DataError);
}

TEST_CASE("family descriptions list every family") {
  const std::string d = describe_families();
  for (const char* f : {"minkowski", "zermelo", "quartic", "lambda"}) CHECK(d.find(f) != std::string::npos);
}
