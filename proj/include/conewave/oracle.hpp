#pragma once

#include "conewave/metric.hpp"
#include "conewave/polyline.hpp"
#include "conewave/wavefront.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace conewave {

// Regular spatial lattice; node (i, j) sits at origin + dx * (i, j).
struct LatticeSpec {
  Vec2 origin = Vec2::Zero();
  double dx = 0.02;
  int nx = 0;
  int ny = 0;

  // Nodes covering [lower, upper] with the given spacing.
  static LatticeSpec from_extents(const Vec2& lower, const Vec2& upper, double dx);
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Vec2 node(int i, int j) const { return origin + dx * Vec2(i, j); }
  Vec2 upper() const { return node(nx - 1, ny - 1); }
  bool contains(const Vec2& x) const;
};

struct OracleOptions {
  double dt_layer = 0.02;
  // Chebyshev radius, in lattice steps, that one layer step may not exceed.
  int neighborhood_radius = 3;
  // Last layer time. When infinite, layering stops once every node is
  // reached or nothing new is reached for as long as a signal needs to cross
  // the lattice.
  double t_max = std::numeric_limits<double>::infinity();
  Execution exec = Execution::parallel;
};

struct OracleStats {
  std::uint64_t layers = 0;
  std::uint64_t lookups = 0;
  // Largest lightlike speed over the lattice states that were sampled.
  double max_speed = 0.0;
};

// Earliest causal arrival time at every lattice node.
struct ArrivalField {
  LatticeSpec grid;
  double dt_layer = 0.0;
  int neighborhood_radius = 3;
  std::vector<double> times;
  // First time the node leaves the set again after entering it; +inf when it
  // stays (always the case where waiting is timelike).
  std::vector<double> exit_times;
  // 1 for nodes that were seeded (inside S, or next to a seed event).
  std::vector<char> source;
  OracleStats stats;

  double time(int i, int j) const { return times[grid.index(i, j)]; }
  // Bilinear interpolation; +inf if any corner is unreachable or x is off-grid.
  double sample(const Vec2& x) const;
  // Smallest exit time over the cell corners around x; +inf off-grid.
  double exit_sample(const Vec2& x) const;
  // True when x is inside the set from before tau - margin until after
  // tau + margin, i.e. (tau, x) lies in the open chronological future.
  bool strictly_inside(const Vec2& x, double tau, double margin) const;
  std::size_t unreachable_count() const;
};

// Layered semi-Lagrangian dilation on the lattice. phi starts as the signed
// distance to S; each layer replaces phi(x) by its minimum over the points
// x - d, d running over the one-layer lightlike displacements ending at x
// (midpoint rule, bilinear lookup). A node's time is the layer crossing of
// phi through zero, interpolated linearly. Throws
// ConfigurationError("oracle", ...) when max_speed * dt_layer exceeds
// neighborhood_radius * dx.
ArrivalField earliest_arrival(const MetricModel& m, const std::vector<Polygon>& S, const LatticeSpec& grid,
                              const OracleOptions& options = {}, double t0 = 0.0);

// Same dilation seeded by the single event (t0, x), started from its exact
// cone section two layers later.
ArrivalField earliest_arrival_from_event(const MetricModel& m, const Vec2& x, double t0, const LatticeSpec& grid,
                                         const OracleOptions& options = {});

// Single-threaded variant that takes the minimum over 360 fixed directions
// instead of a coarse sweep plus golden-section refinement.
ArrivalField earliest_arrival_reference(const MetricModel& m, const std::vector<Polygon>& S,
                                        const LatticeSpec& grid, const OracleOptions& options = {}, double t0 = 0.0);

struct AchronalityViolation {
  int seed_index = 0;
  // -1 for a check against the arrival field itself.
  int other_seed = -1;
  double tau = 0.0;
  Vec2 x = Vec2::Zero();
  double oracle_time = 0.0;
};

struct AchronalityOptions {
  // Events earlier than the oracle time by more than this are violations.
  // Non-positive means dx + dt_layer.
  double margin = 0.0;
  // Active events, taken from the slice a third of the way through, that seed
  // oracles checked against every later slice.
  int pair_samples = 4;
};

struct AchronalityReport {
  std::size_t checked = 0;
  std::size_t off_grid = 0;
  std::size_t pairs_checked = 0;
  double margin = 0.0;
  // Smallest oracle_time - (tau - margin) over checked events and pairs that
  // are still inside the set at tau + margin.
  double worst_slack = std::numeric_limits<double>::infinity();
  std::vector<AchronalityViolation> violations;
  bool pass() const { return violations.empty(); }
};

// Flags active events (tau, x) that S reaches chronologically: x is inside the
// oracle's set over [tau - margin, tau + margin]. Then reruns the oracle from
// sampled events and applies the same test to active events on later slices.
AchronalityReport achronality_check(const MetricModel& m, const ArrivalField& field, const WavefrontResult& result,
                                    const AchronalityOptions& options = {});

struct ComparisonOptions {
  // Pass threshold is tolerance_factor * (dx + dt_layer).
  double tolerance_factor = 4.0;
};

struct ComparisonReport {
  std::size_t compared = 0;
  // Reachable before the last slice according to the oracle, never enclosed
  // by the front.
  std::size_t front_missed = 0;
  // Enclosed by the front but unreachable for the oracle, with no reached
  // lattice neighbour within tolerance either.
  std::size_t front_only = 0;
  // Enclosed by the front, unreachable for the oracle, but next to a node the
  // oracle reaches within tolerance of the front time: the front grazes the
  // edge of the reachable region there.
  std::size_t boundary_grazing = 0;
  double max_abs = 0.0;
  double p95_abs = 0.0;
  // Largest T_front - T_oracle (front late) and T_oracle - T_front (front early).
  double max_front_late = 0.0;
  double max_front_early = 0.0;
  Vec2 worst_node = Vec2::Zero();
  double dx = 0.0;
  double dt_layer = 0.0;
  double tolerance_factor = 4.0;
  // max_abs / (dx + dt_layer).
  double observed_factor = 0.0;
  bool pass = false;
};

// Arrival time of the propagated front at every lattice node: the first slice
// whose active loops enclose the node, interpolated linearly in the distances
// to that slice and the previous one. +inf where the front never arrives and
// NaN on source nodes.
std::vector<double> front_arrival_times(const WavefrontResult& result, const LatticeSpec& grid,
                                        const std::vector<char>& source);

ComparisonReport compare_front_to_oracle(const ArrivalField& field, const WavefrontResult& result,
                                         const ComparisonOptions& options = {});

}  // namespace conewave
