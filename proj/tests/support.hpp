#pragma once

#include "conewave/metric.hpp"
#include "conewave/polyline.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace testing {

using conewave::Vec2;

// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }
  Vec2 unit() {
    const double a = angle();
    return {std::cos(a), std::sin(a)};
  }
  Vec2 point(double half_width) { return {uniform(-half_width, half_width), uniform(-half_width, half_width)}; }
  conewave::SpacetimePoint state(double half_width, double t_max = 1.0) {
    return {uniform(0.0, t_max), point(half_width)};
  }

 private:
  std::mt19937_64 eng_;
};

inline conewave::Polygon circle(int n, double r, Vec2 c = Vec2::Zero()) {
  conewave::Polygon p;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    p.push_back(c + r * Vec2(std::cos(a), std::sin(a)));
  }
  return p;
}

inline conewave::MetricModel minkowski(double c = 1.0) { return conewave::build_metric(conewave::MinkowskiParams{c}); }

inline conewave::MetricModel wind(double wx, double wy = 0.0, double c = 1.0) {
  conewave::ZermeloParams z;
  z.c = conewave::ScalarField::constant(c);
  z.wind = {conewave::ScalarField::constant(wx), conewave::ScalarField::constant(wy)};
  return conewave::build_metric(z);
}

inline conewave::MetricModel quartic(double lambda, double c = 1.0) {
  conewave::QuarticParams q;
  q.c = conewave::ScalarField::constant(c);
  q.lambda = lambda;
  return conewave::build_metric(q);
}

// c = 1 + 0.2 x1, no wind.
inline conewave::MetricModel linear_speed() {
  conewave::ZermeloParams z;
  z.c = conewave::ScalarField::affine(1.0, Vec2(0.2, 0.0));
  conewave::ValidationRegion r;
  r.lower = {-2.0, -2.0};
  r.upper = {2.0, 2.0};
  return conewave::build_metric(z, r);
}

// Smooth variable fields everywhere: speed, a rotating wind and an anisotropic h.
inline conewave::MetricModel rich_zermelo() {
  conewave::ZermeloParams z;
  z.c = conewave::ScalarField::affine(1.0, Vec2(0.1, -0.05), 0.02);
  z.wind = {conewave::ScalarField::affine(0.2, Vec2(0.0, 0.1)), conewave::ScalarField::affine(-0.1, Vec2(0.05, 0.0))};
  z.h = {conewave::ScalarField::affine(1.2, Vec2(0.05, 0.0)), conewave::ScalarField::constant(0.1),
         conewave::ScalarField::affine(0.9, Vec2(0.0, 0.03))};
  return conewave::build_metric(z);
}

}  // namespace testing
