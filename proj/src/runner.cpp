#include "conewave/runner.hpp"

#include "conewave/diagnostics.hpp"
#include "conewave/oracle.hpp"
#include "conewave/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace conewave {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

std::vector<SpacetimePoint> sample_states(const Scenario& s) {
  std::vector<SpacetimePoint> pts;
  for (double t : {s.region.t_min, s.region.t_max})
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        pts.push_back({t, Vec2(s.region.lower[0] + 0.5 * i * (s.region.upper[0] - s.region.lower[0]),
                               s.region.lower[1] + 0.5 * j * (s.region.upper[1] - s.region.lower[1]))});
  return pts;
}

SuiteResult metric_suite(const MetricModel& m, const Scenario& s) {
  SuiteResult r{"metric_checks", true, std::numeric_limits<double>::infinity(), json::object()};
  double worst_fd = 0.0;
  int cone_failures = 0;
  const auto pts = sample_states(s);
  for (const auto& p : pts) {
    const ConeReport cone = verify_cone_conditions(m, p, 64);
    if (!cone.pass) ++cone_failures;
    r.margin = std::min(r.margin, cone.strong_convexity_margin - kStrongConvexityThreshold);
    for (int k = 0; k < 4; ++k) {
      const double th = 0.4 + 1.5 * k;
      const TangentVector v = lightlike_ray(m, p, Vec2(std::cos(th), std::sin(th))).scaled(1.0 + 0.5 * k);
      const TangentVector w(v.v0 * 1.2, v.vx[0], v.vx[1]);
      const Mat3 g = fundamental_tensor(m, p, w), gfd = fundamental_tensor_fd(m, p, w);
      worst_fd = std::max(worst_fd, (g - gfd).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff()));
    }
  }
  r.pass = cone_failures == 0 && worst_fd <= 1e-5;
  r.details = {{"sampled_states", pts.size()}, {"cone_failures", cone_failures}, {"max_tensor_fd_error", worst_fd}};
  return r;
}

SuiteResult lift_suite(const MetricModel& m, const WavefrontResult& res) {
  double worst = 0.0;
  for (const auto& seed : res.seeds) worst = std::max(worst, orthogonality_residual(m, seed));
  SuiteResult r{"lift_residuals", worst <= 1e-10, 1e-10 - worst, json::object()};
  r.details = {{"seeds", res.seeds.size()},
               {"max_residual", worst},
               {"lipschitz_estimate", num(lift_lipschitz_estimate(res.seeds))}};
  return r;
}

SuiteResult conservation_suite(const MetricModel& m, const WavefrontResult& res) {
  double worst = 0.0;
  for (const auto& t : res.traces) worst = std::max(worst, max_lightlike_drift(m, t));
  SuiteResult r{"lightlike_conservation", worst <= 1e-8, 1e-8 - worst, json::object()};
  r.details = {{"max_drift", worst}, {"traces", res.traces.size()}};
  return r;
}

SuiteResult causal_suite(const MetricModel& m, const Scenario& s, const WavefrontResult& res) {
  std::size_t not_lightlike = 0;
  for (const auto& seed : res.seeds)
    if (classify(m, seed.p, seed.N, s.classify_tol).tag != CausalTag::lightlike) ++not_lightlike;
  for (const auto& t : res.traces)
    if (classify(m, t.samples.back().point, t.samples.back().velocity, s.classify_tol).tag != CausalTag::lightlike)
      ++not_lightlike;
  bool spacelike_axis = false;
  for (const auto& p : sample_states(s))
    if (m.L(p, TangentVector(1.0, 0.0, 0.0)) < 0.0) spacelike_axis = true;
  SuiteResult r{"causal_character", not_lightlike == 0, -static_cast<double>(not_lightlike), json::object()};
  r.details = {{"non_lightlike_vectors", not_lightlike}, {"time_axis_spacelike_somewhere", spacelike_axis}};
  return r;
}

SuiteResult trim_suite(const WavefrontResult& res) {
  bool simple = true, monotone = true;
  std::size_t prev_cut = 0;
  json events = json::array();
  for (const auto& sl : res.slices) {
    if (sl.active_count() >= 3 && !slice_is_simple(sl)) simple = false;
    if (sl.cut_count() < prev_cut) monotone = false;
    if (sl.cut_count() != prev_cut) events.push_back({{"tau", sl.tau}, {"cut_points", sl.cut_count()}});
    prev_cut = sl.cut_count();
  }
  std::size_t failed = 0;
  for (const auto& t : res.traces) failed += t.end == TraceEnd::failure;
  SuiteResult r{"trim_events", simple && monotone && failed == 0, simple && monotone ? 0.0 : -1.0, json::object()};
  r.details = {{"all_slices_simple", simple},
               {"monotone", monotone},
               {"first_cut_time", res.first_cut_time ? json(*res.first_cut_time) : json(nullptr)},
               {"events", events},
               {"failed_seeds", failed},
               {"messages", res.failures}};
  return r;
}

SuiteResult degeneracy_suite(const MetricModel& m, const WavefrontResult& res) {
  const DegeneracyReport d = check_degenerate_direction(m, res);
  SuiteResult r{"degenerate_direction", d.pass,
                std::min(kNullEigenvalueTol - d.worst_null_eigenvalue,
                         kNegativeEigenvalueBound - d.max_negative_eigenvalue),
                json::object()};
  r.details = {{"samples", d.samples},
               {"max_abs_null_eigenvalue", d.worst_null_eigenvalue},
               {"max_negative_eigenvalue", num(d.max_negative_eigenvalue)},
               {"max_cross_term", d.worst_cross_term}};
  return r;
}

json slices_summary(const WavefrontResult& res) {
  return {{"seeds", res.seeds.size()}, {"slices", res.slices.size()}};
}

}  // namespace

RunOutcome run_scenario(const Scenario& s, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  json timings = json::object();
  const auto finish_report = [&]() {
    out.report["scenario"] = s.name;
    json suites = json::array();
    for (const auto& r : out.suites)
      suites.push_back({{"name", r.name}, {"pass", r.pass}, {"margin", num(r.margin)}, {"details", r.details}});
    out.report["suites"] = suites;
    out.report["first_cut_time"] =
        out.result.first_cut_time ? json(*out.result.first_cut_time) : json(nullptr);
    out.report["timings"] = timings;
  };
  const auto wants = [&](OutputKind k) {
    return std::find(s.outputs.begin(), s.outputs.end(), k) != s.outputs.end() ||
           (k == OutputKind::svg && opts.svg);
  };

  try {
    std::filesystem::create_directories(opts.out_dir);
    const MetricModel m = build_metric(s.metric, s.region);
    out.suites.push_back(metric_suite(m, s));

    out.result = propagate_boundary(m, s.initial_set, s.t_grid, s.dt_step, opts.exec);
    if (opts.refine) {
      if (!s.max_gap) throw ConfigurationError("/refinement", "--refine needs refinement.max_gap");
      RefineReport rep;
      out.result = refine_front(m, out.result, *s.max_gap, &rep);
      // Hitting the iteration cap is reported as a warning, not a failure.
      SuiteResult r{"refinement", true, *s.max_gap - rep.max_gap_after, json::object()};
      r.details = {{"iterations", rep.iterations},
                   {"converged", rep.converged},
                   {"inserted", rep.inserted},
                   {"max_gap", *s.max_gap},
                   {"max_gap_before", rep.max_gap_before},
                   {"max_gap_after", rep.max_gap_after},
                   {"warnings", out.result.warnings}};
      out.suites.push_back(r);
    }
    out.suites.push_back(lift_suite(m, out.result));
    out.suites.push_back(conservation_suite(m, out.result));
    out.suites.push_back(causal_suite(m, s, out.result));
    out.suites.push_back(trim_suite(out.result));
    out.suites.push_back(degeneracy_suite(m, out.result));

    std::uint64_t steps = 0;
    for (const auto& t : out.result.traces) steps += t.samples.size() - 1;
    timings = slices_summary(out.result);
    timings["rk4_steps"] = steps;

    if (opts.oracle) {
      if (!s.oracle) throw ConfigurationError("/oracle", "--oracle needs an oracle section");
      const OracleSpec& os = *s.oracle;
      const LatticeSpec grid = LatticeSpec::from_extents(os.lower, os.upper, os.dx);
      OracleOptions oo;
      oo.dt_layer = os.dt_layer;
      oo.neighborhood_radius = os.neighborhood_radius;
      oo.exec = opts.exec;
      const ComparisonOptions co;
      oo.t_max = s.t_grid.back() + 2.0 * co.tolerance_factor * (os.dx + os.dt_layer);
      const ArrivalField field = earliest_arrival(m, s.initial_set, grid, oo);
      timings["oracle_nodes"] = grid.size();
      timings["oracle_layers"] = field.stats.layers;
      timings["oracle_lookups"] = field.stats.lookups;

      const ComparisonReport cmp = compare_front_to_oracle(field, out.result, co);
      const double tol = co.tolerance_factor * (os.dx + os.dt_layer);
      SuiteResult rc{"oracle_comparison", cmp.pass, tol - cmp.max_abs, json::object()};
      rc.details = {{"compared_nodes", cmp.compared},     {"max", cmp.max_abs},
                    {"p95", cmp.p95_abs},                 {"max_front_late", cmp.max_front_late},
                    {"max_front_early", cmp.max_front_early}, {"front_missed", cmp.front_missed},
                    {"front_only", cmp.front_only},       {"boundary_grazing", cmp.boundary_grazing},       {"observed_C", cmp.observed_factor},
                    {"C", co.tolerance_factor},           {"dx", os.dx},
                    {"dt_layer", os.dt_layer},            {"neighborhood_radius", os.neighborhood_radius},
                    {"worst_node", {cmp.worst_node[0], cmp.worst_node[1]}}};
      out.suites.push_back(rc);

      const AchronalityReport ar = achronality_check(m, field, out.result);
      SuiteResult ra{"achronality", ar.pass(), std::isfinite(ar.worst_slack) ? ar.worst_slack : 0.0, json::object()};
      ra.details = {{"events_checked", ar.checked},
                    {"events_off_grid", ar.off_grid},
                    {"pairs_checked", ar.pairs_checked},
                    {"margin", ar.margin},
                    {"violations", ar.violations.size()}};
      out.suites.push_back(ra);

      SuiteResult rr{"reachability", cmp.front_only == 0, -static_cast<double>(cmp.front_only), json::object()};
      bool spacelike_axis = false;
      for (const auto& p : sample_states(s))
        if (m.L(p, TangentVector(1.0, 0.0, 0.0)) < 0.0) spacelike_axis = true;
      rr.details = {{"unreachable_nodes", field.unreachable_count()},
                    {"nodes", grid.size()},
                    {"time_axis_spacelike_somewhere", spacelike_axis},
                    {"front_enclosed_but_unreachable", cmp.front_only}};
      out.suites.push_back(rr);

      write_text(opts.out_dir / "arrival.csv", arrival_csv(field));
      json comparison = rc.details;
      comparison["scenario"] = s.name;
      comparison["pass"] = cmp.pass;
      write_text(opts.out_dir / "comparison.json", comparison.dump(2) + "\n");
    }

    if (wants(OutputKind::fronts_csv)) write_text(opts.out_dir / "fronts.csv", fronts_csv(out.result));
    if (wants(OutputKind::traces_csv)) write_text(opts.out_dir / "traces.csv", traces_csv(out.result));
    if (wants(OutputKind::seeds_csv)) write_text(opts.out_dir / "seeds.csv", seeds_csv(m, out.result));
    if (wants(OutputKind::svg)) {
      SvgView view = data_view(out.result);
      if (s.oracle) {
        view.lower = s.oracle->lower;
        view.upper = s.oracle->upper;
      }
      write_text(opts.out_dir / "fronts.svg", front_svg(out.result, view));
    }
    out.exit_code = kExitOk;
    for (const auto& r : out.suites)
      if (!r.pass) out.exit_code = kExitSuiteFailed;
    finish_report();
  } catch (const Error& e) {
    out.exit_code = kExitModuleError;
    finish_report();
    json err = {{"message", e.what()}};
    if (const auto* ce = dynamic_cast<const ConfigurationError*>(&e)) {
      err["type"] = "configuration";
      err["field"] = ce->field();
    } else if (dynamic_cast<const NumericError*>(&e)) {
      err["type"] = "numeric";
    } else if (dynamic_cast<const GeometryError*>(&e)) {
      err["type"] = "geometry";
    } else if (dynamic_cast<const DataError*>(&e)) {
      err["type"] = "data";
    } else {
      err["type"] = "argument";
    }
    out.report["error"] = err;
  } catch (const std::filesystem::filesystem_error& e) {
    out.exit_code = kExitModuleError;
    finish_report();
    out.report["error"] = {{"type", "io"}, {"message", e.what()}};
  }
  if (std::find(s.outputs.begin(), s.outputs.end(), OutputKind::report_json) != s.outputs.end() ||
      out.exit_code == kExitModuleError) {
    try {
      std::filesystem::create_directories(opts.out_dir);
      write_text(opts.out_dir / "report.json", out.report.dump(2) + "\n");
    } catch (const std::exception&) {
      out.exit_code = kExitModuleError;
    }
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace conewave
