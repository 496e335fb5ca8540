#pragma once

#include "conewave/metric.hpp"
#include "conewave/polyline.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conewave {

enum class OutputKind { fronts_csv, traces_csv, seeds_csv, svg, report_json };
std::string_view to_string(OutputKind k);
std::optional<OutputKind> output_from_string(std::string_view name);

struct OracleSpec {
  double dx = 0.02;
  double dt_layer = 0.02;
  Vec2 lower{-2.0, -2.0};
  Vec2 upper{2.0, 2.0};
  int neighborhood_radius = 3;
};

struct Scenario {
  std::string name;
  Family family = Family::minkowski;
  MetricParams metric;
  // One polygon per component of S, after resampling.
  std::vector<Polygon> initial_set;
  std::vector<double> t_grid;
  double dt_step = 1e-3;
  double classify_tol = 1e-9;
  std::optional<OracleSpec> oracle;
  std::optional<double> max_gap;
  std::vector<OutputKind> outputs;
  // Region the metric parameters were validated on.
  ValidationRegion region;
};

// Polygons with fewer vertices than this are resampled along their spline.
inline constexpr std::size_t kMinBoundaryVertices = 16;
inline constexpr std::size_t kResampledVertices = 64;

// Errors are ConfigurationError whose field() is the JSON pointer of the
// offending value.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// Human-readable parameter schema of every built-in family.
std::string describe_families();

}  // namespace conewave
