#include "conewave/metric.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace conewave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pointwise state of the Zermelo coefficients and their derivatives.
struct ZermeloState {
  double c;
  Vec3 dc;
  Vec2 W;
  Eigen::Matrix<double, 2, 3> dW;  // dW(i, k) = dW_i / dx^k
  Mat2 h;
  std::array<Mat2, 3> dh;
};

ZermeloState zermelo_state(const ZermeloParams& z, const SpacetimePoint& p, bool with_derivatives) {
  ZermeloState s;
  s.c = z.c.value(p);
  s.W = Vec2(z.wind[0].value(p), z.wind[1].value(p));
  const double h11 = z.h[0].value(p), h12 = z.h[1].value(p), h22 = z.h[2].value(p);
  s.h << h11, h12, h12, h22;
  if (with_derivatives) {
    s.dc = z.c.gradient(p);
    s.dW.row(0) = z.wind[0].gradient(p).transpose();
    s.dW.row(1) = z.wind[1].gradient(p).transpose();
    const Vec3 g11 = z.h[0].gradient(p), g12 = z.h[1].gradient(p), g22 = z.h[2].gradient(p);
    for (int k = 0; k < 3; ++k) s.dh[k] << g11[k], g12[k], g12[k], g22[k];
  }
  return s;
}

struct QuarticNorm {
  double Q;
  Vec2 dQ;
  Mat2 d2Q;
};

QuarticNorm quartic_norm(const Vec2& y, double lambda) {
  const double a = y[0], b = y[1];
  QuarticNorm q;
  q.Q = a * a * a * a + b * b * b * b + 2.0 * lambda * a * a * b * b;
  q.dQ = Vec2(4.0 * a * a * a + 4.0 * lambda * a * b * b, 4.0 * b * b * b + 4.0 * lambda * a * a * b);
  q.d2Q << 12.0 * a * a + 4.0 * lambda * b * b, 8.0 * lambda * a * b, 8.0 * lambda * a * b,
      12.0 * b * b + 4.0 * lambda * a * a;
  return q;
}

bool field_positive_on(const ScalarField& f, const std::optional<ValidationRegion>& region) {
  switch (f.kind()) {
    case ScalarField::Kind::constant:
      return f.constant_value() > 0.0;
    case ScalarField::Kind::table:
      for (double v : f.table_data()->values)
        if (!(v > 0.0)) return false;
      return true;
    case ScalarField::Kind::affine:
      break;
  }
  if (!region) return f.value(SpacetimePoint{}) > 0.0;
  const int n = std::max(region->samples_per_axis, 2);
  for (int it = 0; it < 2; ++it)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double t = it == 0 ? region->t_min : region->t_max;
        const Vec2 x(region->lower[0] + (region->upper[0] - region->lower[0]) * i / (n - 1),
                     region->lower[1] + (region->upper[1] - region->lower[1]) * j / (n - 1));
        if (!(f.value({t, x}) > 0.0)) return false;
      }
  return true;
}

std::vector<SpacetimePoint> validation_points(const std::optional<ValidationRegion>& region) {
  std::vector<SpacetimePoint> pts;
  if (!region) {
    pts.emplace_back();
    return pts;
  }
  const int n = std::max(region->samples_per_axis, 2);
  for (int it = 0; it < 2; ++it)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double t = it == 0 ? region->t_min : region->t_max;
        pts.push_back({t, Vec2(region->lower[0] + (region->upper[0] - region->lower[0]) * i / (n - 1),
                               region->lower[1] + (region->upper[1] - region->lower[1]) * j / (n - 1))});
      }
  return pts;
}

void validate(const MetricParams& params, const std::optional<ValidationRegion>& region, bool check_lambda) {
  std::visit(overloaded{
                 [](const MinkowskiParams& mk) {
                   if (!(mk.c > 0.0)) throw ConfigurationError("c", "must be positive");
                 },
                 [&](const ZermeloParams& z) {
                   if (!field_positive_on(z.c, region)) throw ConfigurationError("c", "must be positive");
                   auto pts = validation_points(region);
                   for (const auto& h_field : z.h)
                     if (h_field.kind() == ScalarField::Kind::table) {
                       const auto& tb = *h_field.table_data();
                       for (int j = 0; j < tb.ny; ++j)
                         for (int i = 0; i < tb.nx; ++i)
                           pts.push_back({0.0, tb.origin + Vec2(i * tb.spacing[0], j * tb.spacing[1])});
                     }
                   for (const auto& p : pts) {
                     const double h11 = z.h[0].value(p), h12 = z.h[1].value(p), h22 = z.h[2].value(p);
                     if (!(h11 > 0.0 && h11 * h22 - h12 * h12 > 0.0))
                       throw ConfigurationError("h", "not positive definite at sampled point");
                   }
                 },
                 [&](const QuarticParams& q) {
                   if (!field_positive_on(q.c, region)) throw ConfigurationError("c", "must be positive");
                   if (check_lambda && !(q.lambda > kQuarticLambdaMin && q.lambda < kQuarticLambdaMax)) {
                     std::ostringstream os;
                     os << "must lie in (1/3, 3), got " << q.lambda;
                     throw ConfigurationError("lambda", os.str());
                   }
                   if (!check_lambda && !(q.lambda > -1.0))
                     throw ConfigurationError("lambda", "quartic norm degenerates for lambda <= -1");
                 },
             },
             params);
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::minkowski:
      return "minkowski";
    case Family::zermelo:
      return "zermelo";
    case Family::quartic:
      return "quartic";
  }
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view name) {
  if (name == "minkowski") return Family::minkowski;
  if (name == "zermelo") return Family::zermelo;
  if (name == "quartic") return Family::quartic;
  return std::nullopt;
}

MetricModel build_metric(MetricParams params, const std::optional<ValidationRegion>& region) {
  validate(params, region, true);
  return MetricModel(std::move(params));
}

MetricModel build_metric_unchecked(MetricParams params) {
  validate(params, std::nullopt, false);
  return MetricModel(std::move(params));
}

Family MetricModel::family() const {
  return static_cast<Family>(params_.index());
}

double MetricModel::L(const SpacetimePoint& p, const TangentVector& v) const {
  return std::visit(overloaded{
                        [&](const MinkowskiParams& mk) {
                          return mk.c * mk.c * v.v0 * v.v0 - v.vx.squaredNorm();
                        },
                        [&](const ZermeloParams& z) {
                          const ZermeloState s = zermelo_state(z, p, false);
                          const Vec2 r = v.vx - v.v0 * s.W;
                          return s.c * s.c * v.v0 * v.v0 - r.dot(s.h * r);
                        },
                        [&](const QuarticParams& q) {
                          const double c = q.c.value(p);
                          return c * c * v.v0 * v.v0 - std::sqrt(quartic_norm(v.vx, q.lambda).Q);
                        },
                    },
                    params_);
}

Vec3 MetricModel::gradient_v(const SpacetimePoint& p, const TangentVector& v) const {
  return std::visit(overloaded{
                        [&](const MinkowskiParams& mk) -> Vec3 {
                          return {2.0 * mk.c * mk.c * v.v0, -2.0 * v.vx[0], -2.0 * v.vx[1]};
                        },
                        [&](const ZermeloParams& z) -> Vec3 {
                          const ZermeloState s = zermelo_state(z, p, false);
                          const Vec2 hr = s.h * (v.vx - v.v0 * s.W);
                          return {2.0 * s.c * s.c * v.v0 + 2.0 * s.W.dot(hr), -2.0 * hr[0], -2.0 * hr[1]};
                        },
                        [&](const QuarticParams& q) -> Vec3 {
                          const double c = q.c.value(p);
                          const QuarticNorm n = quartic_norm(v.vx, q.lambda);
                          if (n.Q <= 0.0) return {2.0 * c * c * v.v0, 0.0, 0.0};
                          const Vec2 d = -n.dQ / (2.0 * std::sqrt(n.Q));
                          return {2.0 * c * c * v.v0, d[0], d[1]};
                        },
                    },
                    params_);
}

Mat3 MetricModel::hessian_half(const SpacetimePoint& p, const TangentVector& v) const {
  return std::visit(overloaded{
                        [&](const MinkowskiParams& mk) -> Mat3 {
                          Mat3 g = Mat3::Zero();
                          g.diagonal() << mk.c * mk.c, -1.0, -1.0;
                          return g;
                        },
                        [&](const ZermeloParams& z) -> Mat3 {
                          const ZermeloState s = zermelo_state(z, p, false);
                          const Vec2 hW = s.h * s.W;
                          Mat3 g;
                          g(0, 0) = s.c * s.c - s.W.dot(hW);
                          g.block<1, 2>(0, 1) = hW.transpose();
                          g.block<2, 1>(1, 0) = hW;
                          g.block<2, 2>(1, 1) = -s.h;
                          return g;
                        },
                        [&](const QuarticParams& q) -> Mat3 {
                          const double c = q.c.value(p);
                          const QuarticNorm n = quartic_norm(v.vx, q.lambda);
                          if (n.Q <= 0.0)
                            throw NumericError("quartic fundamental tensor undefined at vx = 0");
                          const double root = std::sqrt(n.Q);
                          const Mat2 hess_root = n.d2Q / (2.0 * root) - n.dQ * n.dQ.transpose() / (4.0 * n.Q * root);
                          Mat3 g = Mat3::Zero();
                          g(0, 0) = c * c;
                          g.block<2, 2>(1, 1) = -0.5 * hess_root;
                          return g;
                        },
                    },
                    params_);
}

PositionDerivatives MetricModel::position_derivatives(const SpacetimePoint& p, const TangentVector& v) const {
  PositionDerivatives out;
  std::visit(overloaded{
                 [&](const MinkowskiParams&) {},
                 [&](const ZermeloParams& z) {
                   const ZermeloState s = zermelo_state(z, p, true);
                   const Vec2 r = v.vx - v.v0 * s.W;
                   const Vec2 hr = s.h * r;
                   for (int k = 0; k < 3; ++k) {
                     const Vec2 Wk = s.dW.col(k);
                     const Mat2& hk = s.dh[k];
                     out.dL_dx[k] = 2.0 * s.c * s.dc[k] * v.v0 * v.v0 - r.dot(hk * r) + 2.0 * v.v0 * Wk.dot(hr);
                     out.d2L_dv_dx(0, k) = 4.0 * s.c * s.dc[k] * v.v0 + 2.0 * Wk.dot(hr) + 2.0 * s.W.dot(hk * r) -
                                           2.0 * v.v0 * s.W.dot(s.h * Wk);
                     const Vec2 dvx = -2.0 * (hk * r) + 2.0 * v.v0 * (s.h * Wk);
                     out.d2L_dv_dx(1, k) = dvx[0];
                     out.d2L_dv_dx(2, k) = dvx[1];
                   }
                 },
                 [&](const QuarticParams& q) {
                   const double c = q.c.value(p);
                   const Vec3 dc = q.c.gradient(p);
                   for (int k = 0; k < 3; ++k) {
                     out.dL_dx[k] = 2.0 * c * dc[k] * v.v0 * v.v0;
                     out.d2L_dv_dx(0, k) = 4.0 * c * dc[k] * v.v0;
                   }
                 },
             },
             params_);
  return out;
}

Vec2 MetricModel::fiber_center(const SpacetimePoint& p) const {
  if (const auto* z = std::get_if<ZermeloParams>(&params_)) return {z->wind[0].value(p), z->wind[1].value(p)};
  return Vec2::Zero();
}

double MetricModel::max_speed(const SpacetimePoint& p) const {
  return std::visit(overloaded{
                        [&](const MinkowskiParams& mk) { return mk.c; },
                        [&](const ZermeloParams& z) {
                          const ZermeloState s = zermelo_state(z, p, false);
                          const double hmin = Eigen::SelfAdjointEigenSolver<Mat2>(s.h).eigenvalues()[0];
                          return s.W.norm() + s.c / std::sqrt(hmin);
                        },
                        [&](const QuarticParams& q) {
                          // Q on the unit circle is 1 - (1 - lambda) sin^2(2 theta) / 2.
                          const double qmin = q.lambda < 1.0 ? 0.5 * (1.0 + q.lambda) : 1.0;
                          return q.c.value(p) / std::pow(qmin, 0.25);
                        },
                    },
                    params_);
}

double MetricModel::fiber_radius(const SpacetimePoint& p, const Vec2& u) const {
  return std::visit(overloaded{
                        [&](const MinkowskiParams& mk) { return mk.c; },
                        [&](const ZermeloParams& z) {
                          const ZermeloState s = zermelo_state(z, p, false);
                          return s.c / std::sqrt(u.dot(s.h * u));
                        },
                        [&](const QuarticParams& q) {
                          return q.c.value(p) / std::pow(quartic_norm(u, q.lambda).Q, 0.25);
                        },
                    },
                    params_);
}

double MetricModel::earliest_traversal_time(const SpacetimePoint& p, const Vec2& d) const {
  if (d.isZero(0.0)) return 0.0;
  return std::visit(overloaded{
                        [&](const MinkowskiParams& mk) { return d.norm() / mk.c; },
                        [&](const ZermeloParams& z) {
                          // L(tau, d) = a tau^2 + b tau + c0 with c0 < 0.
                          const ZermeloState s = zermelo_state(z, p, false);
                          const Vec2 hW = s.h * s.W;
                          const double a = s.c * s.c - s.W.dot(hW);
                          const double b = 2.0 * d.dot(hW);
                          const double c0 = -d.dot(s.h * d);
                          if (std::abs(a) < 1e-14 * (s.c * s.c)) return b > 0.0 ? -c0 / b : kInf;
                          const double disc = b * b - 4.0 * a * c0;
                          if (disc < 0.0) return kInf;
                          const double sq = std::sqrt(disc);
                          if (a > 0.0) return -2.0 * c0 / (b + sq);
                          // Spacelike time axis: causal window between two positive roots.
                          if (b <= 0.0) return kInf;
                          return (-b + sq) / (2.0 * a) > 0.0 ? 2.0 * c0 / (-b - sq) : kInf;
                        },
                        [&](const QuarticParams& q) {
                          return std::pow(quartic_norm(d, q.lambda).Q, 0.25) / q.c.value(p);
                        },
                    },
                    params_);
}

bool MetricModel::in_domain(const SpacetimePoint& p) const {
  return std::visit(overloaded{
                        [&](const MinkowskiParams&) { return true; },
                        [&](const ZermeloParams& z) {
                          for (const auto* f : {&z.c, &z.wind[0], &z.wind[1], &z.h[0], &z.h[1], &z.h[2]})
                            if (!f->contains(p.x)) return false;
                          const ZermeloState s = zermelo_state(z, p, false);
                          return s.c > 0.0 && s.h(0, 0) > 0.0 && s.h.determinant() > 0.0;
                        },
                        [&](const QuarticParams& q) { return q.c.contains(p.x) && q.c.value(p) > 0.0; },
                    },
                    params_);
}

bool MetricModel::is_time_dependent() const {
  return std::visit(overloaded{
                        [](const MinkowskiParams&) { return false; },
                        [](const ZermeloParams& z) {
                          for (const auto* f : {&z.c, &z.wind[0], &z.wind[1], &z.h[0], &z.h[1], &z.h[2]})
                            if (f->is_time_dependent()) return true;
                          return false;
                        },
                        [](const QuarticParams& q) { return q.c.is_time_dependent(); },
                    },
                    params_);
}

bool MetricModel::is_homogeneous() const {
  return std::visit(overloaded{
                        [](const MinkowskiParams&) { return true; },
                        [](const ZermeloParams& z) {
                          for (const auto* f : {&z.c, &z.wind[0], &z.wind[1], &z.h[0], &z.h[1], &z.h[2]})
                            if (!f->is_constant()) return false;
                          return true;
                        },
                        [](const QuarticParams& q) { return q.c.is_constant(); },
                    },
                    params_);
}

double eval_L(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v) {
  return m.L(p, v);
}

double fd_step(const TangentVector& v) {
  return 1e-4 * std::max(1.0, v.components().norm());
}

double scaled_determinant(const Mat3& g) {
  Mat3 s = g;
  for (int r = 0; r < 3; ++r) {
    const double m = s.row(r).cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    s.row(r) /= m;
  }
  return std::abs(s.determinant());
}

Mat3 fundamental_tensor(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v) {
  Mat3 g = m.hessian_half(p, v);
  g = 0.5 * (g + g.transpose()).eval();
  if (scaled_determinant(g) <= 1e-12) {
    std::ostringstream os;
    os << "degenerate fundamental tensor at p=(" << p.t << ", " << p.x.transpose() << "), v=("
       << v.components().transpose() << ")";
    throw NumericError(os.str());
  }
  return g;
}

Mat3 fundamental_tensor_fd(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v) {
  const double h = fd_step(v);
  const Vec3 base = v.components();
  const auto Lat = [&](const Vec3& w) { return m.L(p, TangentVector::from_components(w)); };
  Mat3 g;
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const Vec3 ea = Vec3::Unit(a) * h;
      const Vec3 eb = Vec3::Unit(b) * h;
      const double val =
          (Lat(base + ea + eb) - Lat(base + ea - eb) - Lat(base - ea + eb) + Lat(base - ea - eb)) / (8.0 * h * h);
      g(a, b) = val;
      g(b, a) = val;
    }
  }
  return g;
}

std::string_view to_string(CausalTag tag) {
  switch (tag) {
    case CausalTag::timelike:
      return "timelike";
    case CausalTag::lightlike:
      return "lightlike";
    case CausalTag::causal_boundary_ambiguous:
      return "causal_boundary_ambiguous";
    case CausalTag::spacelike:
      return "spacelike";
    case CausalTag::past_causal:
      return "past_causal";
  }
  return "unknown";
}

CausalTag classify_values(double l, double v0, double tol) {
  if (std::abs(l) <= tol && std::abs(v0) <= tol) return CausalTag::causal_boundary_ambiguous;
  if (l > tol && v0 > 0.0) return CausalTag::timelike;
  if (std::abs(l) <= tol && v0 > 0.0) return CausalTag::lightlike;
  if (l >= -tol && v0 < 0.0) return CausalTag::past_causal;
  if (l < -tol) return CausalTag::spacelike;
  return CausalTag::causal_boundary_ambiguous;
}

Classification classify(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v, double tol) {
  if (v.is_zero()) throw ArgumentError("classify: zero vector");
  if (m.family() == Family::quartic && v.vx.isZero(0.0)) {
    // Deep inside the cone; the quartic norm is not smooth here.
    return {v.v0 > 0.0 ? CausalTag::timelike : CausalTag::past_causal, m.L(p, v), v.v0};
  }
  const double l = m.L(p, v);
  return {classify_values(l, v.v0, tol), l, v.v0};
}

TangentVector lightlike_ray(const MetricModel& m, const SpacetimePoint& p, const Vec2& u_in) {
  const double un = u_in.norm();
  if (!(un > 0.0)) throw ArgumentError("lightlike_ray: zero direction");
  const Vec2 u = u_in / un;
  const Vec2 y0 = m.fiber_center(p);
  const auto f = [&](double s) { return m.L(p, TangentVector(1.0, y0 + s * u)); };
  const auto df = [&](double s) {
    const Vec3 g = m.gradient_v(p, TangentVector(1.0, y0 + s * u));
    return g[1] * u[0] + g[2] * u[1];
  };

  double lo = 1e-6;
  if (!(f(lo) > 0.0)) throw NumericError("lightlike_ray: fiber center is not inside the cone");
  double hi = 1.0;
  int grow = 0;
  while (f(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 80) throw NumericError("lightlike_ray: no sign change while growing bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  double fs = f(s);
  for (int it = 0; it < 50 && std::abs(fs) >= 1e-13; ++it) {
    const double d = df(s);
    double next = d != 0.0 ? s - fs / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double fn = f(next);
    (fn > 0.0 ? lo : hi) = next;
    s = next;
    fs = fn;
  }
  if (!(std::abs(fs) < 1e-12)) {
    std::ostringstream os;
    os << "lightlike_ray: root finder did not converge, |L| = " << std::abs(fs);
    throw NumericError(os.str());
  }
  return {1.0, y0 + s * u};
}

ConeReport verify_cone_conditions(const MetricModel& m, const SpacetimePoint& p, int samples) {
  if (samples < 8) throw ArgumentError("verify_cone_conditions: samples must be >= 8");
  ConeReport rep;
  rep.samples = samples;
  const Vec2 center = m.fiber_center(p);
  std::vector<Vec2> y(samples);
  std::vector<double> angle(samples);
  double mean_radius = 0.0;
  for (int k = 0; k < samples; ++k) {
    angle[k] = 2.0 * std::numbers::pi * k / samples;
    const TangentVector v = lightlike_ray(m, p, Vec2(std::cos(angle[k]), std::sin(angle[k])));
    y[k] = v.vx;
    mean_radius += (v.vx - center).norm() / samples;

    const CausalTag back = classify(m, p, v.scaled(-1.0)).tag;
    if (back == CausalTag::timelike || back == CausalTag::lightlike) {
      rep.salient = false;
      rep.failures.push_back("saliency: -v is future causal at angle " + std::to_string(angle[k]));
    }
    if (m.family() != Family::quartic || !v.vx.isZero(0.0)) {
      const Eigen::SelfAdjointEigenSolver<Mat3> es(m.hessian_half(p, v));
      const auto ev = es.eigenvalues();
      if (!(ev[0] < 0.0 && ev[1] < 0.0 && ev[2] > 0.0)) rep.lorentzian = false;
    }
  }
  if (!rep.lorentzian) rep.failures.push_back("fundamental tensor lost Lorentzian signature on the cone");

  rep.worst_turn = std::numeric_limits<double>::infinity();
  rep.strong_convexity_margin = std::numeric_limits<double>::infinity();
  const double r2 = mean_radius * mean_radius;
  for (int k = 0; k < samples; ++k) {
    const Vec2 a = y[k] - y[(k + samples - 1) % samples];
    const Vec2 b = y[(k + 1) % samples] - y[k];
    const double cross = a[0] * b[1] - a[1] * b[0];
    const double turn = cross / r2;
    // Menger curvature through three consecutive fiber points, scaled by the mean radius.
    const double curvature = 2.0 * cross / (a.norm() * b.norm() * (a + b).norm()) * mean_radius;
    rep.worst_turn = std::min(rep.worst_turn, turn);
    if (curvature < rep.strong_convexity_margin) {
      rep.strong_convexity_margin = curvature;
      rep.worst_angle = angle[k];
    }
  }
  if (rep.worst_turn <= 0.0) {
    rep.convex = false;
    rep.failures.push_back("convexity: discrete turning changes sign");
  }
  if (rep.strong_convexity_margin <= kStrongConvexityThreshold) {
    rep.strongly_convex = false;
    rep.failures.push_back("strong convexity: margin " + std::to_string(rep.strong_convexity_margin) +
                           " at angle " + std::to_string(rep.worst_angle));
  }
  rep.pass = rep.salient && rep.convex && rep.strongly_convex && rep.lorentzian;
  return rep;
}

}  // namespace conewave
