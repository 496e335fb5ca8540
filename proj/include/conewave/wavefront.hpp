#pragma once

#include "conewave/front_lift.hpp"
#include "conewave/geodesic.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace conewave {

enum class Execution { serial, parallel };

struct SlicePoint {
  int seed_index = 0;
  int component = 0;
  Vec2 x = Vec2::Zero();
  bool active = true;
  // Deactivated by cut detection (as opposed to a failed geodesic).
  bool cut = false;
};

// The front R ∩ {t = tau}: points in seed order, grouped by component.
struct WavefrontSlice {
  double tau = 0.0;
  std::vector<SlicePoint> points;
  bool closed = true;

  std::size_t active_count() const;
  std::size_t cut_count() const;
};

// Boundary component of the initial set, kept so fronts can be refined.
struct SeedCurve {
  int component = 0;
  PeriodicSpline spline;
  double orientation_sign = 1.0;
};

struct WavefrontResult {
  std::vector<WavefrontSlice> slices;
  // traces[i] belongs to seeds[i]; both are ordered by (component, parameter).
  std::vector<GeodesicTrace> traces;
  std::vector<SeedPoint> seeds;
  std::vector<SeedCurve> curves;
  std::vector<double> t_grid;
  double dt_step = kDefaultStep;
  std::optional<double> first_cut_time;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

// Integrates one by_t geodesic per seed and assembles one slice per t_grid
// entry, then trims cut points. Seeds must be lifted.
WavefrontResult propagate(const MetricModel& m, std::vector<SeedPoint> seeds, std::span<const double> t_grid,
                          double dt_step = kDefaultStep, Execution exec = Execution::parallel);

// Lifts every component of the initial set and propagates.
WavefrontResult propagate_boundary(const MetricModel& m, const std::vector<Polygon>& components,
                                   std::span<const double> t_grid, double dt_step = kDefaultStep,
                                   Execution exec = Execution::parallel);

// The tau = 0 slice made of the seed positions.
WavefrontSlice seed_slice(const std::vector<SeedPoint>& seeds);

// Deactivates swallowed points slice by slice. A slice is only examined when
// its per-component active polylines cross; a point is then swallowed if a
// small outward nudge keeps it enclosed by some component's full curve.
// Deactivation carries over to every later slice.
std::vector<WavefrontSlice> detect_cut_and_trim(std::vector<WavefrontSlice> slices);

// Closed polylines through the active points: active runs are chained to the
// nearest following run start, possibly across components.
std::vector<Polygon> active_loops(const WavefrontSlice& slice);

// Every active loop is simple and no two loops cross.
bool slice_is_simple(const WavefrontSlice& slice);

// Front at an arbitrary tau, trimmed like the nearest stored slice at or after it.
WavefrontSlice slice_at_t(const WavefrontResult& result, double tau);

struct RefineReport {
  int iterations = 0;
  bool converged = true;
  std::size_t inserted = 0;
  // Gap statistics of the final slice before and after refinement.
  double max_gap_before = 0.0;
  double max_gap_after = 0.0;
};

inline constexpr int kRefineIterationCap = 5;

// Splits every gap between adjacent active points of the final slice that is
// longer than max_gap by lifting the seed-spline midpoint.
WavefrontResult refine_front(const MetricModel& m, const WavefrontResult& result, double max_gap,
                             RefineReport* report = nullptr);

// Largest distance between adjacent active points of a slice.
double max_active_gap(const WavefrontSlice& slice);

}  // namespace conewave
