// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
#include "conewave/diagnostics.hpp"
#include "conewave/oracle.hpp"
#include "conewave/runner.hpp"
#include "conewave/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace conewave;

namespace {

namespace fs = std::filesystem;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario scenario(const std::string& name) { return load_scenario(fs::path(CONEWAVE_SCENARIO_DIR) / (name + ".json")); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_drift(const MetricModel& m, const WavefrontResult& r) {
  double d = 0.0;
  for (const auto& t : r.traces) d = std::max(d, max_lightlike_drift(m, t));
  return d;
}

double max_lift_residual(const MetricModel& m, const WavefrontResult& r) {
  double d = 0.0;
  for (const auto& s : r.seeds) d = std::max(d, orthogonality_residual(m, s));
  return d;
}

// Largest | |x - center(tau)| - radius(tau) | over every slice point.
double circle_error(const WavefrontResult& r, const std::function<Vec2(double)>& center,
                    const std::function<double(double)>& radius) {
  double worst = 0.0;
  for (const auto& s : r.slices)
    for (const auto& p : s.points) worst = std::max(worst, std::abs((p.x - center(s.tau)).norm() - radius(s.tau)));
  return worst;
}

void disk(int id, const std::string& name, const Vec2& wind) {
  const Scenario s = scenario(name);
  const auto t0 = std::chrono::steady_clock::now();
  const MetricModel m = build_metric(s.metric, s.region);
  const WavefrontResult r = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step);
  const double secs = seconds_since(t0);
  const double err = circle_error(r, [&](double t) { Vec2 c = t * wind; return c; }, [](double t) { return 1.0 + t; });
  const double lift = max_lift_residual(m, r), drift = max_drift(m, r);
  bool pass = err <= 1e-6 && secs <= 5.0 && r.seeds.size() == 64 && r.t_grid.back() == 1.0;
  std::string extra;
  if (id == 1) {
    pass = pass && lift <= 1e-10 && drift <= 1e-8;
    extra = fmt(", lift residual %.2e (<= 1e-10), drift %.2e (<= 1e-8)", lift, drift);
  }
  report(id, pass, fmt("%s: radius error %.2e (<= 1e-6)%s, %.2f s (<= 5 s)", name.c_str(), err, extra.c_str(), secs));
}

void quartic_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = scenario("minkowski_disk");
  QuarticParams q;
  q.c = ScalarField::constant(1.0);
  q.lambda = 1.0;
  const MetricModel mq = build_metric(q, s.region), mm = build_metric(s.metric, s.region);
  const WavefrontResult a = propagate_boundary(mq, s.initial_set, s.t_grid, s.dt_step);
  const WavefrontResult b = propagate_boundary(mm, s.initial_set, s.t_grid, s.dt_step);
  double worst = 0.0;
  bool same_shape = a.traces.size() == b.traces.size();
  for (std::size_t i = 0; same_shape && i < a.traces.size(); ++i) {
    same_shape = a.traces[i].samples.size() == b.traces[i].samples.size();
    for (std::size_t k = 0; same_shape && k < a.traces[i].samples.size(); ++k) {
      const auto &p = a.traces[i].samples[k], &q2 = b.traces[i].samples[k];
      worst = std::max({worst, std::abs(p.point.t - q2.point.t), (p.point.x - q2.point.x).norm()});
    }
  }
  const double secs = seconds_since(t0);
  report(3, same_shape && worst <= 1e-9 && secs <= 10.0,
         fmt("quartic lambda=1 vs minkowski: max pointwise trace difference %.2e (<= 1e-9), %.2f s (<= 10 s)", worst,
             secs));
}

ComparisonReport compare_at(const MetricModel& m, const Scenario& s, const WavefrontResult& r, double h) {
  const LatticeSpec grid = LatticeSpec::from_extents(s.oracle->lower, s.oracle->upper, h);
  OracleOptions o;
  o.dt_layer = h;
  o.neighborhood_radius = s.oracle->neighborhood_radius;
  const ComparisonOptions co;
  o.t_max = s.t_grid.back() + 2.0 * co.tolerance_factor * (h + h);
  return compare_front_to_oracle(earliest_arrival(m, s.initial_set, grid, o), r, co);
}

void fermat(const std::string& name) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = scenario(name);
  const MetricModel m = build_metric(s.metric, s.region);
  const WavefrontResult r = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step);
  const LatticeSpec coarse = LatticeSpec::from_extents(s.oracle->lower, s.oracle->upper, 0.02);
  const ComparisonReport c1 = compare_at(m, s, r, 0.02);
  const ComparisonReport c2 = compare_at(m, s, r, 0.01);
  const double secs = seconds_since(t0);
  const double ratio = c1.max_abs / c2.max_abs;
  const bool pass = coarse.nx == 201 && coarse.ny == 201 && c1.pass && c1.max_abs <= 4.0 * (0.02 + 0.02) &&
                    ratio >= 2.0 / 1.5 && ratio <= 2.0 * 1.5 && secs <= 60.0;
  report(4, pass,
         fmt("%s: max |T_front - T_oracle| %.5f at h=0.02 (<= 0.16), %.5f at h=0.01, ratio %.3f (in [1.333, 3]), "
             "%dx%d lattice, %.1f s (<= 60 s)",
             name.c_str(), c1.max_abs, c2.max_abs, ratio, coarse.nx, coarse.ny, secs));
}

void degeneracy() {
  double null_eig = 0.0, neg_eig = -std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  bool pass = true;
  for (const auto& e : fs::directory_iterator(CONEWAVE_SCENARIO_DIR)) {
    if (e.path().extension() != ".json") continue;
    const Scenario s = load_scenario(e.path());
    const MetricModel m = build_metric(s.metric, s.region);
    const WavefrontResult r = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step);
    const DegeneracyReport d = check_degenerate_direction(m, r);
    pass = pass && d.pass && d.samples > 0;
    samples += d.samples;
    null_eig = std::max(null_eig, d.worst_null_eigenvalue);
    neg_eig = std::max(neg_eig, d.max_negative_eigenvalue);
  }
  report(5, pass && null_eig <= 1e-8 && neg_eig <= -1e-6,
         fmt("all scenarios: %zu samples, max |lambda1| %.2e (<= 1e-8), max lambda2 %.3e (<= -1e-6)", samples,
             null_eig, neg_eig));
}

// Steps the initial boundary with the lifted field N (Heun's method in t: the
// predicted polygon is re-lifted and the two lifts are averaged) and measures
// the distance to the geodesic endpoints at t = 0.5.
double relift_flow_error(const MetricModel& m, const Polygon& start, const WavefrontResult& r, double spacing) {
  const double horizon = 0.5;
  const int steps = static_cast<int>(std::lround(horizon / spacing));
  Polygon poly = start;
  double t = 0.0;
  for (int k = 0; k < steps; ++k) {
    const auto seeds = lift_front(m, poly, Orientation::counter_clockwise, t);
    Polygon predicted = poly;
    for (std::size_t i = 0; i < poly.size(); ++i) predicted[i] += spacing * seeds[i].N.vx / seeds[i].N.v0;
    const auto ahead = lift_front(m, predicted, Orientation::counter_clockwise, t + spacing);
    for (std::size_t i = 0; i < poly.size(); ++i)
      poly[i] += 0.5 * spacing * (seeds[i].N.vx / seeds[i].N.v0 + ahead[i].N.vx / ahead[i].N.v0);
    t += spacing;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    worst = std::max(worst, (poly[i] - interpolate(r.traces[i], horizon).point.x).norm());
  return worst;
}

void integral_curves() {
  const Scenario s = scenario("variable_speed");
  const MetricModel m = build_metric(s.metric, s.region);
  const WavefrontResult r = propagate_boundary(m, s.initial_set, std::vector<double>{0.5}, s.dt_step);
  const double e1 = relift_flow_error(m, s.initial_set[0], r, 0.1);
  const double e2 = relift_flow_error(m, s.initial_set[0], r, 0.05);
  const double e3 = relift_flow_error(m, s.initial_set[0], r, 0.025);
  const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
  report(6, o1 >= 1.0 && o2 >= 1.0 && e3 < e2 && e2 < e1,
         fmt("variable_speed: re-lift flow error %.3e / %.3e / %.3e at spacing 0.1 / 0.05 / 0.025, "
             "observed orders %.2f, %.2f (>= 1)",
             e1, e2, e3, o1, o2));
}

void merge() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = scenario("two_circles");
  const MetricModel m = build_metric(s.metric, s.region);
  const WavefrontResult r = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step);
  const double spacing = s.t_grid[1] - s.t_grid[0];
  bool simple = true;
  for (const auto& sl : r.slices) simple = simple && slice_is_simple(sl);
  OracleOptions o;
  o.dt_layer = s.oracle->dt_layer;
  o.neighborhood_radius = s.oracle->neighborhood_radius;
  o.t_max = s.t_grid.back() + 8.0 * (s.oracle->dx + s.oracle->dt_layer);
  const ArrivalField f =
      earliest_arrival(m, s.initial_set, LatticeSpec::from_extents(s.oracle->lower, s.oracle->upper, s.oracle->dx), o);
  const AchronalityReport a = achronality_check(m, f, r);
  const double secs = seconds_since(t0);
  const bool cut_ok = r.first_cut_time && std::abs(*r.first_cut_time - 0.5) <= spacing + 1e-9;
  report(7, cut_ok && simple && a.pass() && secs <= 20.0,
         fmt("two_circles: first_cut_time %.3f (0.5 +- %.2f), slices simple: %s, achronality violations %zu "
             "(%zu events, %zu pairs), %.1f s (<= 20 s)",
             r.first_cut_time ? *r.first_cut_time : -1.0, spacing, simple ? "yes" : "no", a.violations.size(),
             a.checked, a.pairs_checked, secs));
}

void strong_wind() {
  const Scenario s = scenario("strong_wind");
  const MetricModel m = build_metric(s.metric, s.region);
  const LatticeSpec grid = LatticeSpec::from_extents(s.oracle->lower, s.oracle->upper, s.oracle->dx);
  OracleOptions o;
  o.dt_layer = s.oracle->dt_layer;
  o.neighborhood_radius = s.oracle->neighborhood_radius;
  o.t_max = 0.4;
  const double upwind = earliest_arrival(m, s.initial_set, grid, o).sample(Vec2(-0.5, 0.0));

  const WavefrontResult r = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step);
  const ComparisonReport c = compare_at(m, s, r, s.oracle->dx);
  const double tol = 4.0 * (s.oracle->dx + s.oracle->dt_layer);
  report(8, upwind > 0.4 && c.pass && c.max_abs <= tol && c.front_only == 0,
         fmt("strong_wind: oracle time at (-0.5, 0) = %g (> 0.4), front vs oracle max %.5f (<= %.2f), "
             "front-only nodes %zu, grazing %zu, missed %zu",
             upwind, c.max_abs, tol, c.front_only, c.boundary_grazing, c.front_missed));
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / "conewave_acceptance";
  std::size_t files = 0, scenarios = 0;
  bool pass = true;
  std::string mismatch;
  for (const auto& e : fs::directory_iterator(CONEWAVE_SCENARIO_DIR)) {
    if (e.path().extension() != ".json") continue;
    const Scenario s = load_scenario(e.path());
    std::map<std::string, std::string> runs[2];
    for (int k = 0; k < 2; ++k) {
      RunOptions o;
      o.out_dir = root / (s.name + std::to_string(k));
      fs::remove_all(o.out_dir);
      o.oracle = s.oracle.has_value();
      o.refine = s.max_gap.has_value();
      o.svg = true;
      run_scenario(s, o);
      runs[k] = read_dir(o.out_dir);
    }
    ++scenarios;
    files += runs[0].size();
    if (runs[0] != runs[1] || runs[0].empty()) {
      pass = false;
      mismatch += " " + s.name;
    }
  }
  fs::remove_all(root);
  report(9, pass && scenarios > 0,
         fmt("%zu scenarios run twice, %zu files compared byte for byte%s%s", scenarios, files,
             mismatch.empty() ? "" : ", differing:", mismatch.c_str()));
}

void guarded(int id, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, [] { disk(1, "minkowski_disk", Vec2::Zero()); });
  guarded(2, [] { disk(2, "constant_wind", Vec2(0.3, 0.0)); });
  guarded(3, quartic_identity);
  guarded(4, [] { fermat("minkowski_disk"); });
  guarded(4, [] { fermat("constant_wind"); });
  guarded(5, degeneracy);
  guarded(6, integral_curves);
  guarded(7, merge);
  guarded(8, strong_wind);
  guarded(9, determinism);
  return failures == 0 ? 0 : 1;
}
