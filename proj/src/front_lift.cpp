#include "conewave/front_lift.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace conewave {

namespace {

Vec2 direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

// g_v(v, u) for the spatial tangent u; equals dL_v(u) / 2 by homogeneity.
double orthogonality(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v, const Vec2& u) {
  const Vec3 g = m.gradient_v(p, v);
  return 0.5 * (g[1] * u[0] + g[2] * u[1]);
}

}  // namespace

std::array<TangentVector, 2> lift_roots(const MetricModel& m, const SeedPoint& seed) {
  if (seed.tangent_basis.size() != 1) throw ArgumentError("lift_point: planar slices need exactly one tangent");
  const Vec2 u = seed.tangent_basis.front();
  const SpacetimePoint& p = seed.p;
  const auto f = [&](double theta) { return orthogonality(m, p, lightlike_ray(m, p, direction(theta)), u); };

  const double step = 2.0 * std::numbers::pi / kLiftSweep;
  std::vector<double> profile(kLiftSweep);
  for (int k = 0; k < kLiftSweep; ++k) profile[k] = f(k * step);

  std::vector<TangentVector> roots;
  for (int k = 0; k < kLiftSweep; ++k) {
    const double fa = profile[k];
    const double fb = profile[(k + 1) % kLiftSweep];
    if ((fa >= 0.0) == (fb >= 0.0)) continue;
    double lo = k * step, hi = (k + 1) * step;
    double flo = fa;
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    for (int it = 0; it < 100 && std::abs(fm) >= 1e-13 && hi - lo > 1e-16; ++it) {
      if ((fm >= 0.0) == (flo >= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
      mid = 0.5 * (lo + hi);
      fm = f(mid);
    }
    if (!(std::abs(fm) < 1e-10)) {
      std::ostringstream os;
      os << "lift_point: root polish failed at seed " << seed.index << " (|f| = " << std::abs(fm) << ")";
      throw GeometryError(os.str());
    }
    roots.push_back(lightlike_ray(m, p, direction(mid)));
  }
  if (roots.size() != 2) {
    std::ostringstream os;
    os << "lift_point: expected 2 L-orthogonal lightlike directions at seed " << seed.index << ", found "
       << roots.size() << "; f(theta) profile every 30 degrees:";
    for (int k = 0; k < kLiftSweep; k += kLiftSweep / 12) os << ' ' << profile[k];
    throw GeometryError(os.str());
  }
  const double a = roots[0].vx.dot(seed.outward_conormal);
  const double b = roots[1].vx.dot(seed.outward_conormal);
  if (std::abs(a - b) <= 1e-12) {
    std::ostringstream os;
    os << "lift_point: outward selection is degenerate at seed " << seed.index;
    throw GeometryError(os.str());
  }
  if (a > b) return {roots[0], roots[1]};
  return {roots[1], roots[0]};
}

TangentVector lift_point(const MetricModel& m, const SeedPoint& seed, double normalization) {
  if (!(normalization > 0.0)) throw ArgumentError("lift_point: normalization must be positive");
  return lift_roots(m, seed)[0].scaled(normalization);
}

double resolve_orientation(const Polygon& boundary, Orientation orientation) {
  const double area = signed_area(boundary);
  if (area == 0.0) throw DataError("boundary polygon has zero area");
  const double sign = area > 0.0 ? 1.0 : -1.0;
  if (orientation == Orientation::counter_clockwise && sign < 0.0)
    throw DataError("boundary declared counter-clockwise but traverses clockwise");
  if (orientation == Orientation::clockwise && sign > 0.0)
    throw DataError("boundary declared clockwise but traverses counter-clockwise");
  return sign;
}

std::vector<SeedPoint> lift_spline_points(const MetricModel& m, const PeriodicSpline& spline,
                                          std::span<const double> parameters, double orientation_sign, double t0,
                                          int component, int first_index) {
  std::vector<SeedPoint> seeds(parameters.size());
  // Seeds are independent; each iteration writes only its own slot.
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(parameters.size()); ++i) {
    SeedPoint s;
    s.index = first_index + static_cast<int>(i);
    s.component = component;
    s.parameter = parameters[i];
    s.p = {t0, spline.position(parameters[i])};
    const Vec2 tangent = spline.derivative(parameters[i]).normalized();
    s.tangent_basis = {tangent};
    s.outward_conormal = orientation_sign * Vec2(tangent[1], -tangent[0]);
    seeds[i] = std::move(s);
  }
  std::vector<std::string> errors(parameters.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(seeds.size()); ++i) {
    try {
      seeds[i].N = lift_point(m, seeds[i]);
      seeds[i].lifted = true;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GeometryError(e);
  return seeds;
}

std::vector<SeedPoint> lift_front(const MetricModel& m, const Polygon& boundary, Orientation orientation, double t0,
                                  int component, int first_index) {
  if (boundary.size() < 16) throw ArgumentError("lift_front: boundary needs at least 16 vertices");
  if (!is_simple_closed(boundary)) throw DataError("lift_front: boundary polyline self-intersects");
  const double sign = resolve_orientation(boundary, orientation);
  const PeriodicSpline spline(boundary);
  std::vector<double> params(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i) params[i] = spline.knot(i);
  return lift_spline_points(m, spline, params, sign, t0, component, first_index);
}

double orthogonality_residual(const MetricModel& m, const SeedPoint& seed) {
  double worst = 0.0;
  for (const auto& u : seed.tangent_basis) worst = std::max(worst, std::abs(orthogonality(m, seed.p, seed.N, u)));
  return worst + std::abs(m.L(seed.p, seed.N));
}

double lift_lipschitz_estimate(const std::vector<SeedPoint>& seeds) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i) {
    if (seeds[i].component != seeds[i + 1].component) continue;
    const double dn = (seeds[i + 1].outward_conormal - seeds[i].outward_conormal).norm();
    const double dN = (seeds[i + 1].N.vx - seeds[i].N.vx).norm();
    if (dn > 0.0) worst = std::max(worst, dN / dn);
  }
  return worst;
}

}  // namespace conewave
