#include "conewave/front_lift.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace conewave;

namespace {

SeedPoint make_seed(Vec2 x, Vec2 tangent, Vec2 outward, double t = 0.0) {
  SeedPoint s;
  s.p = {t, x};
  s.tangent_basis = {tangent.normalized()};
  s.outward_conormal = outward.normalized();
  return s;
}

Polygon rounded_square(double half, double r, int per_edge, int per_corner) {
  Polygon p;
  const double e = half - r;
  const Vec2 centers[4] = {Vec2(e, e), Vec2(-e, e), Vec2(-e, -e), Vec2(e, -e)};
  for (int c = 0; c < 4; ++c) {
    const double a0 = c * std::numbers::pi / 2;
    for (int k = 0; k < per_corner; ++k) {
      const double a = a0 + (std::numbers::pi / 2) * k / per_corner;
      p.push_back(centers[c] + r * Vec2(std::cos(a), std::sin(a)));
    }
    const Vec2 from = centers[c] + r * Vec2(std::cos(a0 + std::numbers::pi / 2), std::sin(a0 + std::numbers::pi / 2));
    const Vec2 to = centers[(c + 1) % 4] + r * Vec2(std::cos(a0 + std::numbers::pi / 2), std::sin(a0 + std::numbers::pi / 2));
    for (int k = 0; k < per_edge; ++k) p.push_back(from + (to - from) * double(k) / per_edge);
  }
  return p;
}

}  // namespace

TEST_CASE("lift examples") {
  const MetricModel mk = testing::minkowski();
  const TangentVector n = lift_point(mk, make_seed(Vec2(1, 0), Vec2(0, 1), Vec2(1, 0)));
  CHECK((n.components() - Vec3(1, 1, 0)).norm() < 1e-10);

  const MetricModel w = testing::wind(0.3);
  const TangentVector nw = lift_point(w, make_seed(Vec2(0, 1), Vec2(-1, 0), Vec2(0, 1)));
  CHECK((nw.components() - Vec3(1, 0.3, 1)).norm() < 1e-10);

  // The other root points inward and is orthogonal as well.
  const auto roots = lift_roots(w, make_seed(Vec2(0, 1), Vec2(-1, 0), Vec2(0, 1)));
  CHECK((roots[1].components() - Vec3(1, 0.3, -1)).norm() < 1e-10);
  SeedPoint inward = make_seed(Vec2(0, 1), Vec2(-1, 0), Vec2(0, 1));
  inward.N = roots[1];
  inward.lifted = true;
  CHECK(orthogonality_residual(w, inward) < 1e-10);
}

TEST_CASE("a rotated lift has a proportional residual") {
  const MetricModel mk = testing::minkowski();
  SeedPoint s = make_seed(Vec2(1, 0), Vec2(0, 1), Vec2(1, 0));
  const double eps = 1e-3;
  s.N = {1.0, Vec2(std::cos(eps), std::sin(eps))};
  s.lifted = true;
  const double r = orthogonality_residual(mk, s);
  CHECK(r > 0.5 * eps);
  CHECK(r < 2.0 * eps);
}

TEST_CASE("normalization only rescales") {
  testing::Gen gen(41);
  const MetricModel m = testing::rich_zermelo();
  for (int k = 0; k < 20; ++k) {
    const Vec2 t = gen.unit();
    const SeedPoint s = make_seed(gen.point(1.0), t, Vec2(t[1], -t[0]), gen.uniform(0, 1));
    const Vec3 a = lift_point(m, s).components(), b = lift_point(m, s, 2.5).components();
    CHECK((b - 2.5 * a).norm() <= 1e-12 * b.norm());
  }
}

TEST_CASE("property: exactly two orthogonal lightlike roots") {
  testing::Gen gen(42);
  const MetricModel models[] = {testing::rich_zermelo(), testing::quartic(0.5), testing::quartic(2.5),
                                testing::wind(0.6, -0.3)};
  for (const auto& m : models)
    for (int k = 0; k < 25; ++k) {
      const Vec2 t = gen.unit();
      SeedPoint s = make_seed(gen.point(1.0), t, Vec2(t[1], -t[0]), gen.uniform(0, 1));
      const auto roots = lift_roots(m, s);
      CHECK((roots[0].vx - roots[1].vx).norm() > 1e-6);
      for (const auto& r : roots) {
        CHECK(r.v0 == doctest::Approx(1.0));
        s.N = r;
        s.lifted = true;
        CHECK(orthogonality_residual(m, s) < 1e-9);
      }
      CHECK(roots[0].vx.dot(s.outward_conormal) >= roots[1].vx.dot(s.outward_conormal));
    }
}

TEST_CASE("lifting a Minkowski circle gives radial vectors") {
  const Polygon c = testing::circle(64, 0.8);
  const auto seeds = lift_front(testing::minkowski(), c, Orientation::automatic);
  REQUIRE(seeds.size() == 64);
  for (const auto& s : seeds) {
    CHECK(s.lifted);
    CHECK((s.N.components() - Vec3(1.0, s.p.x[0] / 0.8, s.p.x[1] / 0.8)).norm() < 1e-10);
  }
  CHECK(lift_lipschitz_estimate(seeds) < 2.0);

  const Polygon cw(c.rbegin(), c.rend());
  const auto seeds_cw = lift_front(testing::minkowski(), cw, Orientation::clockwise);
  for (const auto& s : seeds_cw) CHECK(s.N.vx.dot(s.p.x) > 0.0);
  CHECK_THROWS_AS(lift_front(testing::minkowski(), cw, Orientation::counter_clockwise), DataError);
}

TEST_CASE("flat edges of a rounded square share one lift") {
  const Polygon p = rounded_square(1.0, 0.3, 24, 12);
  const auto seeds = lift_front(testing::wind(0.2, 0.1), p, Orientation::counter_clockwise);
  // Middle of the right edge (last edge in the construction) has outward normal (1, 0).
  int checked = 0;
  for (const auto& s : seeds)
    if (s.p.x[0] > 0.999 && std::abs(s.p.x[1]) < 0.15) {
      CHECK((s.N.vx - Vec2(1.2, 0.1)).norm() < 1e-6);
      ++checked;
    }
  CHECK(checked >= 3);
}

TEST_CASE("bad boundaries are rejected") {
  Polygon eight;
  for (int k = 0; k < 40; ++k) {
    const double a = 2.0 * std::numbers::pi * (k + 0.5) / 40;
    eight.push_back(Vec2(std::sin(a), std::sin(a) * std::cos(a)));
  }
  CHECK_THROWS_AS(lift_front(testing::minkowski(), eight, Orientation::automatic), DataError);
  CHECK_THROWS_AS(lift_front(testing::minkowski(), testing::circle(8, 1.0), Orientation::automatic), ArgumentError);
}
