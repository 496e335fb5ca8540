#include "conewave/fields.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace conewave;

TEST_CASE("constant and affine fields") {
  const ScalarField c = ScalarField::constant(2.5);
  CHECK(c.value({0.3, Vec2(1.0, -4.0)}) == 2.5);
  CHECK(c.gradient({0.3, Vec2(1.0, -4.0)}).isZero(0.0));
  CHECK(c.is_constant());
  CHECK_FALSE(c.is_time_dependent());

  const ScalarField a = ScalarField::affine(1.0, Vec2(0.2, -0.5), 0.1);
  CHECK(a.value({2.0, Vec2(1.0, 2.0)}) == doctest::Approx(1.0 + 0.2 - 1.0 + 0.2));
  CHECK(a.gradient({0.0, Vec2::Zero()}) == Vec3(0.1, 0.2, -0.5));
  CHECK(a.is_time_dependent());
  CHECK_FALSE(ScalarField::affine(1.0, Vec2(0.2, 0.0)).is_time_dependent());
}

TEST_CASE("table fields reproduce bilinear functions exactly") {
  // f = 1 + 2x - y + 0.5xy is bilinear, so interpolation must be exact.
  const auto f = [](const Vec2& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1]; };
  FieldTable tb;
  tb.origin = Vec2(-1.0, -2.0);
  tb.spacing = Vec2(0.5, 0.25);
  tb.nx = 5;
  tb.ny = 17;
  for (int j = 0; j < tb.ny; ++j)
    for (int i = 0; i < tb.nx; ++i) tb.values.push_back(f(tb.origin + Vec2(i * tb.spacing[0], j * tb.spacing[1])));
  const ScalarField s = ScalarField::table(tb);

  testing::Gen gen(11);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x(gen.uniform(-1.0, 1.0), gen.uniform(-2.0, 2.0));
    CHECK(s.value({0.0, x}) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(s.contains(x));
  }
  CHECK_FALSE(s.contains(Vec2(1.5, 0.0)));

  // Gradient against central differences inside one cell.
  const Vec2 x(0.1, 0.3);
  const double h = 1e-6;
  const Vec3 g = s.gradient({0.0, x});
  CHECK(g[1] == doctest::Approx((s.value({0.0, x + Vec2(h, 0)}) - s.value({0.0, x - Vec2(h, 0)})) / (2 * h)));
  CHECK(g[2] == doctest::Approx((s.value({0.0, x + Vec2(0, h)}) - s.value({0.0, x - Vec2(0, h)})) / (2 * h)));
}

TEST_CASE("malformed tables are rejected") {
  FieldTable tb;
  tb.nx = 1;
  tb.ny = 3;
  tb.values = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(ScalarField::table(tb), ConfigurationError);
  tb.nx = 2;
  CHECK_THROWS_AS(ScalarField::table(tb), ConfigurationError);
  tb.values.resize(6, 0.0);
  tb.spacing = Vec2(0.0, 1.0);
  CHECK_THROWS_AS(ScalarField::table(tb), ConfigurationError);
}
