#pragma once

#include "conewave/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conewave {

enum class Parametrization { affine, by_t };

struct TraceSample {
  double tau = 0.0;
  SpacetimePoint point;
  TangentVector velocity;
};

enum class TraceEnd { horizon, domain_exit, failure };

// A sampled cone geodesic. In the by_t parametrization tau = t - t_start and
// every velocity has v0 = 1.
struct GeodesicTrace {
  int seed_index = 0;
  std::vector<TraceSample> samples;
  Parametrization parametrization = Parametrization::by_t;
  TraceEnd end = TraceEnd::horizon;
  // Failure site description when end == failure.
  std::string failure;

  double t_start() const { return samples.front().point.t; }
  double t_end() const { return samples.back().point.t; }
};

// Acceleration a of the geodesic equation gamma'' = a(gamma, gamma'):
// g_v a = r with r_j = (dL/dx^j - d2L/dv^j dx^k v^k) / 2.
TangentVector spray_acceleration(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v);
// Same system with every derivative taken by central finite differences.
TangentVector spray_acceleration_fd(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v);

// Moves a nearly lightlike v = (1, y) back onto the cone keeping the
// medium-relative direction y - fiber_center fixed. Returns v0 = 1.
TangentVector project_lightlike(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v);

inline constexpr double kDefaultStep = 1e-3;

// Fixed-step RK4 in the by_t parametrization with lightlike re-projection
// after every step. Stops at p0.t + t_horizon or on leaving the domain.
GeodesicTrace integrate_geodesic(const MetricModel& m, const SpacetimePoint& p0, const TangentVector& v0,
                                 double t_horizon, double dt_step = kDefaultStep, int seed_index = 0);

// Plain RK4 on (gamma, gamma') in an affine parameter, no projection.
GeodesicTrace integrate_geodesic_affine(const MetricModel& m, const SpacetimePoint& p0, const TangentVector& v0,
                                        double parameter_length, double step, int seed_index = 0);

GeodesicTrace reparametrize_by_t(const GeodesicTrace& trace);

// Cubic Hermite interpolation of a by_t trace at tau; velocity is linear.
TraceSample interpolate(const GeodesicTrace& trace, double tau);

double max_lightlike_drift(const MetricModel& m, const GeodesicTrace& trace);

}  // namespace conewave
