#include "conewave/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conewave {

namespace {

TangentVector solve_spray(const Mat3& g, const Vec3& rhs, const SpacetimePoint& p, const TangentVector& v) {
  const Eigen::PartialPivLU<Mat3> lu(g);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    std::ostringstream os;
    os << "singular fundamental tensor in spray solve (rcond=" << rcond << ") at t=" << p.t << " x=("
       << p.x.transpose() << ") v=(" << v.components().transpose() << ")";
    throw NumericError(os.str());
  }
  return TangentVector::from_components(lu.solve(rhs));
}

std::string describe(const SpacetimePoint& p) {
  std::ostringstream os;
  os << "t=" << p.t << " x=(" << p.x[0] << ", " << p.x[1] << ")";
  return os.str();
}

// By-t state: position x and spatial velocity y = dx/dt.
struct State {
  Vec2 x;
  Vec2 y;
};

State rhs(const MetricModel& m, double t, const State& s) {
  const TangentVector a = spray_acceleration(m, {t, s.x}, TangentVector(1.0, s.y));
  return {s.y, a.vx - a.v0 * s.y};
}

}  // namespace

TangentVector spray_acceleration(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v) {
  if (m.is_homogeneous()) return {0.0, Vec2::Zero()};
  const PositionDerivatives d = m.position_derivatives(p, v);
  const Vec3 r = 0.5 * (d.dL_dx - d.d2L_dv_dx * v.components());
  return solve_spray(m.hessian_half(p, v), r, p, v);
}

TangentVector spray_acceleration_fd(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v) {
  const double h = 1e-5 * std::max(1.0, p.coords().norm());
  const Vec3 base = p.coords();
  Vec3 dL = Vec3::Zero();
  Mat3 mixed = Mat3::Zero();
  const double hv = fd_step(v);
  for (int k = 0; k < 3; ++k) {
    const SpacetimePoint plus = SpacetimePoint::from_coords(base + h * Vec3::Unit(k));
    const SpacetimePoint minus = SpacetimePoint::from_coords(base - h * Vec3::Unit(k));
    dL[k] = (m.L(plus, v) - m.L(minus, v)) / (2.0 * h);
    for (int j = 0; j < 3; ++j) {
      const Vec3 e = hv * Vec3::Unit(j);
      const auto Lv = [&](const SpacetimePoint& q, const Vec3& w) {
        return m.L(q, TangentVector::from_components(v.components() + w));
      };
      const double dvp = (Lv(plus, e) - Lv(plus, -e)) / (2.0 * hv);
      const double dvm = (Lv(minus, e) - Lv(minus, -e)) / (2.0 * hv);
      mixed(j, k) = (dvp - dvm) / (2.0 * h);
    }
  }
  const Vec3 r = 0.5 * (dL - mixed * v.components());
  return solve_spray(fundamental_tensor_fd(m, p, v), r, p, v);
}

TangentVector project_lightlike(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v) {
  const Vec2 y = v.vx / v.v0;
  const Vec2 rel = y - m.fiber_center(p);
  return lightlike_ray(m, p, rel);
}

GeodesicTrace integrate_geodesic(const MetricModel& m, const SpacetimePoint& p0, const TangentVector& v0,
                                 double t_horizon, double dt_step, int seed_index) {
  if (!(v0.v0 > 0.0)) throw ArgumentError("integrate_geodesic: initial velocity must be future pointing");
  if (!(dt_step > 0.0) || !(t_horizon >= 0.0)) throw ArgumentError("integrate_geodesic: bad step or horizon");
  const TangentVector start = v0.scaled(1.0 / v0.v0);
  if (!(std::abs(m.L(p0, start)) <= 1e-10))
    throw ArgumentError("integrate_geodesic: initial velocity is not lightlike");

  GeodesicTrace trace;
  trace.seed_index = seed_index;
  trace.parametrization = Parametrization::by_t;
  const long steps = std::max(0L, static_cast<long>(std::ceil(t_horizon / dt_step - 1e-9)));
  trace.samples.reserve(steps + 1);
  trace.samples.push_back({0.0, p0, start});

  State s{p0.x, start.vx};
  double t = p0.t;
  for (long k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? p0.t + t_horizon : p0.t + k * dt_step;
    const double h = t_next - t;
    try {
      const State k1 = rhs(m, t, s);
      const State k2 = rhs(m, t + 0.5 * h, {s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y});
      const State k3 = rhs(m, t + 0.5 * h, {s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y});
      const State k4 = rhs(m, t + h, {s.x + h * k3.x, s.y + h * k3.y});
      State next{s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                 s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
      const SpacetimePoint p{t_next, next.x};
      if (!m.in_domain(p)) {
        trace.end = TraceEnd::domain_exit;
        break;
      }
      next.y = project_lightlike(m, p, TangentVector(1.0, next.y)).vx;
      s = next;
      t = t_next;
      trace.samples.push_back({t - p0.t, p, TangentVector(1.0, s.y)});
    } catch (const NumericError& e) {
      trace.end = TraceEnd::failure;
      trace.failure = describe({t, s.x}) + ": " + e.what();
      break;
    }
  }
  return trace;
}

GeodesicTrace integrate_geodesic_affine(const MetricModel& m, const SpacetimePoint& p0, const TangentVector& v0,
                                        double parameter_length, double step, int seed_index) {
  if (!(step > 0.0) || !(parameter_length >= 0.0)) throw ArgumentError("integrate_geodesic_affine: bad step");
  GeodesicTrace trace;
  trace.seed_index = seed_index;
  trace.parametrization = Parametrization::affine;
  trace.samples.push_back({0.0, p0, v0});

  using Vec6 = Eigen::Matrix<double, 6, 1>;
  const auto f = [&](const Vec6& s) {
    const SpacetimePoint p = SpacetimePoint::from_coords(s.head<3>());
    const TangentVector v = TangentVector::from_components(s.tail<3>());
    Vec6 out;
    out.head<3>() = s.tail<3>();
    out.tail<3>() = spray_acceleration(m, p, v).components();
    return out;
  };
  Vec6 s;
  s << p0.coords(), v0.components();
  const long steps = std::max(0L, static_cast<long>(std::ceil(parameter_length / step - 1e-9)));
  double param = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double next_param = k == steps ? parameter_length : k * step;
    const double h = next_param - param;
    try {
      const Vec6 k1 = f(s);
      const Vec6 k2 = f(s + 0.5 * h * k1);
      const Vec6 k3 = f(s + 0.5 * h * k2);
      const Vec6 k4 = f(s + h * k3);
      const Vec6 next = s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const SpacetimePoint p = SpacetimePoint::from_coords(next.head<3>());
      if (!m.in_domain(p)) {
        trace.end = TraceEnd::domain_exit;
        break;
      }
      s = next;
      param = next_param;
      trace.samples.push_back({param, p, TangentVector::from_components(s.tail<3>())});
    } catch (const NumericError& e) {
      trace.end = TraceEnd::failure;
      trace.failure = describe(SpacetimePoint::from_coords(s.head<3>())) + ": " + e.what();
      break;
    }
  }
  return trace;
}

GeodesicTrace reparametrize_by_t(const GeodesicTrace& trace) {
  if (trace.parametrization == Parametrization::by_t) return trace;
  GeodesicTrace out = trace;
  out.parametrization = Parametrization::by_t;
  if (trace.samples.empty()) return out;
  const double t0 = trace.samples.front().point.t;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    auto& s = out.samples[i];
    if (i > 0 && !(s.point.t > out.samples[i - 1].point.t))
      throw DataError("reparametrize_by_t: t is not strictly increasing along the trace");
    if (!(s.velocity.v0 > 0.0)) throw DataError("reparametrize_by_t: velocity is not future pointing");
    s.tau = s.point.t - t0;
    s.velocity = s.velocity.scaled(1.0 / s.velocity.v0);
  }
  return out;
}

TraceSample interpolate(const GeodesicTrace& trace, double tau) {
  if (trace.parametrization != Parametrization::by_t)
    throw ArgumentError("interpolate: trace must be parametrized by t");
  const auto& s = trace.samples;
  if (s.empty() || tau < s.front().tau - 1e-12 || tau > s.back().tau + 1e-12)
    throw ArgumentError("interpolate: tau outside the trace");
  auto it = std::lower_bound(s.begin(), s.end(), tau, [](const TraceSample& a, double v) { return a.tau < v; });
  if (it == s.begin()) return s.front();
  if (it == s.end()) return s.back();
  if (it->tau == tau) return *it;
  const TraceSample& b = *it;
  const TraceSample& a = *(it - 1);
  const double h = b.tau - a.tau;
  const double u = (tau - a.tau) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  TraceSample out;
  out.tau = tau;
  out.point.t = a.point.t + (b.point.t - a.point.t) * u;
  out.point.x = h00 * a.point.x + h10 * h * a.velocity.vx + h01 * b.point.x + h11 * h * b.velocity.vx;
  out.velocity = TangentVector(1.0, (1 - u) * a.velocity.vx + u * b.velocity.vx);
  return out;
}

double max_lightlike_drift(const MetricModel& m, const GeodesicTrace& trace) {
  double worst = 0.0;
  for (const auto& s : trace.samples) worst = std::max(worst, std::abs(m.L(s.point, s.velocity)));
  return worst;
}

}  // namespace conewave
