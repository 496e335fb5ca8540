#pragma once

#include "conewave/metric.hpp"
#include "conewave/polyline.hpp"
#include "conewave/spline.hpp"

#include <array>
#include <span>
#include <vector>

namespace conewave {

// A point of the initial boundary (or of a later slice) with its tangent
// frame, outward conormal and, once lifted, the lightlike vector N.
struct SeedPoint {
  int index = 0;
  int component = 0;
  // Position of the point along its component's spline.
  double parameter = 0.0;
  SpacetimePoint p;
  // Unit spatial tangents (one in the plane).
  std::vector<Vec2> tangent_basis;
  Vec2 outward_conormal = Vec2::Zero();
  TangentVector N;
  bool lifted = false;
};

enum class Orientation { automatic, counter_clockwise, clockwise };

inline constexpr int kLiftSweep = 720;

// Both future lightlike vectors (dt = 1) that are L-orthogonal to the
// seed's tangent, ordered by decreasing projection on the outward conormal.
std::array<TangentVector, 2> lift_roots(const MetricModel& m, const SeedPoint& seed);

// The outward root, scaled so that dt(N) = normalization.
TangentVector lift_point(const MetricModel& m, const SeedPoint& seed, double normalization = 1.0);

// Fits a periodic spline through `boundary`, computes tangents and outward
// conormals at the vertices and lifts each one. Seeds are numbered from
// first_index in vertex order.
std::vector<SeedPoint> lift_front(const MetricModel& m, const Polygon& boundary, Orientation orientation,
                                  double t0 = 0.0, int component = 0, int first_index = 0);

// Lifts arbitrary spline parameters of an already fitted boundary.
// orientation_sign is +1 for counter-clockwise traversal, -1 otherwise.
std::vector<SeedPoint> lift_spline_points(const MetricModel& m, const PeriodicSpline& spline,
                                          std::span<const double> parameters, double orientation_sign, double t0,
                                          int component, int first_index);

// +1 (counter-clockwise) or -1, validated against the requested orientation.
double resolve_orientation(const Polygon& boundary, Orientation orientation);

// max over the tangent basis of |g_N(N, u)| plus |L(N)|.
double orthogonality_residual(const MetricModel& m, const SeedPoint& seed);

// max |N_{i+1} - N_i| / |n_{i+1} - n_i| over adjacent seeds of one component.
double lift_lipschitz_estimate(const std::vector<SeedPoint>& seeds);

}  // namespace conewave
