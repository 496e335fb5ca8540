#include "conewave/scenario.hpp"
#include "conewave/wavefront.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace conewave;

namespace {

const std::vector<double> kGrid = {0.25, 0.5, 1.0};

double radius_error(const WavefrontSlice& s, const Vec2& center, double r) {
  double worst = 0.0;
  for (const auto& p : s.points) worst = std::max(worst, std::abs((p.x - center).norm() - r));
  return worst;
}

Scenario scenario(const std::string& name) {
  return load_scenario(std::string(CONEWAVE_SCENARIO_DIR) + "/" + name + ".json");
}

}  // namespace

TEST_CASE("Minkowski disk grows at unit speed") {
  const WavefrontResult r = propagate_boundary(testing::minkowski(), {testing::circle(64, 1.0)}, kGrid);
  REQUIRE(r.slices.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(r.slices[k].tau == kGrid[k]);
    CHECK(r.slices[k].active_count() == 64);
    CHECK(radius_error(r.slices[k], Vec2::Zero(), 1.0 + kGrid[k]) <= 1e-6);
  }
  CHECK_FALSE(r.first_cut_time);
  CHECK(r.failures.empty());

  const WavefrontSlice half = slice_at_t(r, 0.4);
  CHECK(radius_error(half, Vec2::Zero(), 1.4) <= 1e-6);
  const WavefrontSlice again = slice_at_t(r, 0.5);
  for (std::size_t i = 0; i < again.points.size(); ++i) CHECK(again.points[i].x == r.slices[1].points[i].x);
  CHECK_THROWS_AS(slice_at_t(r, 1.5), ArgumentError);
  CHECK_THROWS_AS(slice_at_t(r, -0.1), ArgumentError);
}

TEST_CASE("constant wind drifts the circles") {
  const Vec2 w(0.3, -0.2);
  const WavefrontResult r = propagate_boundary(testing::wind(w[0], w[1]), {testing::circle(64, 0.5)}, kGrid);
  for (std::size_t k = 0; k < 3; ++k) CHECK(radius_error(r.slices[k], kGrid[k] * w, 0.5 + kGrid[k]) <= 1e-6);
}

TEST_CASE("slice interpolation is step converged") {
  const MetricModel m = testing::rich_zermelo();
  const std::vector<double> grid = {0.3, 0.6};
  const WavefrontResult a = propagate_boundary(m, {testing::circle(32, 0.7)}, grid, 1e-3);
  const WavefrontResult b = propagate_boundary(m, {testing::circle(32, 0.7)}, grid, 5e-4);
  const WavefrontSlice sa = slice_at_t(a, 0.4537), sb = slice_at_t(b, 0.4537);
  double worst = 0.0;
  for (std::size_t i = 0; i < sa.points.size(); ++i) worst = std::max(worst, (sa.points[i].x - sb.points[i].x).norm());
  CHECK(worst <= 1e-5);
}

TEST_CASE("serial and parallel propagation agree bitwise") {
  const MetricModel m = testing::rich_zermelo();
  const std::vector<Polygon> set = {testing::circle(48, 0.5, Vec2(-0.6, 0)), testing::circle(48, 0.5, Vec2(0.6, 0))};
  const WavefrontResult s = propagate_boundary(m, set, kGrid, 1e-3, Execution::serial);
  const WavefrontResult p = propagate_boundary(m, set, kGrid, 1e-3, Execution::parallel);
  REQUIRE(s.slices.size() == p.slices.size());
  for (std::size_t k = 0; k < s.slices.size(); ++k)
    for (std::size_t i = 0; i < s.slices[k].points.size(); ++i) {
      CHECK(s.slices[k].points[i].x == p.slices[k].points[i].x);
      CHECK(s.slices[k].points[i].active == p.slices[k].points[i].active);
    }
  CHECK(s.first_cut_time == p.first_cut_time);
}

TEST_CASE("two circles merge at half the gap") {
  const Scenario sc = scenario("two_circles");
  const WavefrontResult r = propagate_boundary(build_metric(sc.metric), sc.initial_set, sc.t_grid, sc.dt_step);
  REQUIRE(r.first_cut_time);
  CHECK(std::abs(*r.first_cut_time - 0.5) <= 0.02 + 1e-9);
  for (const auto& s : r.slices) CHECK(slice_is_simple(s));
  // Before the merge nothing is cut, afterwards the slice forms one loop.
  CHECK(r.slices.front().cut_count() == 0);
  CHECK(active_loops(r.slices.back()).size() == 1);
}

TEST_CASE("kidney trimming is monotone") {
  const Scenario sc = scenario("kidney");
  const WavefrontResult r = propagate_boundary(build_metric(sc.metric), sc.initial_set, sc.t_grid, sc.dt_step);
  REQUIRE(r.first_cut_time);
  for (std::size_t k = 1; k < r.slices.size(); ++k) {
    for (std::size_t i = 0; i < r.slices[k].points.size(); ++i)
      if (r.slices[k - 1].points[i].cut) CHECK(r.slices[k].points[i].cut);
    CHECK(r.slices[k].cut_count() >= r.slices[k - 1].cut_count());
    CHECK(slice_is_simple(r.slices[k]));
  }
}

TEST_CASE("trimming leaves crossing-free slices alone") {
  const WavefrontResult r = propagate_boundary(testing::wind(0.4), {testing::circle(40, 1.0)}, kGrid);
  const auto trimmed = detect_cut_and_trim(r.slices);
  for (std::size_t k = 0; k < trimmed.size(); ++k) {
    CHECK(trimmed[k].cut_count() == 0);
    for (std::size_t i = 0; i < trimmed[k].points.size(); ++i) CHECK(trimmed[k].points[i].x == r.slices[k].points[i].x);
  }
}

TEST_CASE("refinement inserts lifted spline midpoints") {
  const MetricModel m = testing::wind(0.2, 0.1);
  const Polygon c16 = testing::circle(16, 1.0);
  const WavefrontResult r = propagate_boundary(m, {c16}, kGrid);

  RefineReport rep;
  const WavefrontResult same = refine_front(m, r, 10.0, &rep);
  CHECK(rep.inserted == 0);
  CHECK(same.slices.back().points.size() == 16);

  const WavefrontResult fine = refine_front(m, r, 0.5, &rep);
  CHECK(rep.converged);
  CHECK(rep.inserted == 16);
  CHECK(rep.max_gap_after <= 0.5);
  REQUIRE(fine.slices.back().points.size() == 32);

  const PeriodicSpline spline(c16);
  std::vector<double> params;
  for (std::size_t i = 0; i < 16; ++i) {
    const double next = i + 1 < 16 ? spline.knot(i + 1) : spline.period();
    params.push_back(spline.knot(i));
    params.push_back(0.5 * (spline.knot(i) + next));
  }
  const auto seeds = lift_spline_points(m, spline, params, 1.0, 0.0, 0, 0);
  const WavefrontResult direct = propagate(m, seeds, kGrid);
  for (std::size_t i = 0; i < 32; ++i)
    CHECK((fine.slices.back().points[i].x - direct.slices.back().points[i].x).norm() <= 1e-8);
}

TEST_CASE("re-lifting a slice recovers the transported direction") {
  const MetricModel m = testing::rich_zermelo();
  const WavefrontResult r = propagate_boundary(m, {testing::circle(128, 0.6)}, std::vector<double>{0.5});
  Polygon slice;
  for (const auto& p : r.slices.back().points) slice.push_back(p.x);
  const auto relifted = lift_front(m, slice, Orientation::counter_clockwise, 0.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < relifted.size(); ++i) {
    const Vec2 a = r.traces[i].samples.back().velocity.vx, b = relifted[i].N.vx;
    worst = std::max(worst, std::abs(std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b))));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("bad grids are rejected") {
  const auto seeds = lift_front(testing::minkowski(), testing::circle(16, 1.0), Orientation::automatic);
  CHECK_THROWS_AS(propagate(testing::minkowski(), seeds, std::vector<double>{0.5, 0.25}), ArgumentError);
  CHECK_THROWS_AS(propagate(testing::minkowski(), seeds, std::vector<double>{}), ArgumentError);
  auto unlifted = seeds;
  unlifted[3].lifted = false;
  CHECK_THROWS_AS(propagate(testing::minkowski(), unlifted, kGrid), ArgumentError);
}
