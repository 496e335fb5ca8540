#include "conewave/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace conewave {

namespace {

struct Range {
  std::size_t begin, end;
  std::size_t size() const { return end - begin; }
  std::size_t next(std::size_t i) const { return i + 1 == end ? begin : i + 1; }
  std::size_t prev(std::size_t i) const { return i == begin ? end - 1 : i - 1; }
};

// Contiguous runs of points sharing a component id.
std::vector<Range> component_ranges(const std::vector<SlicePoint>& pts) {
  std::vector<Range> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    if (i == pts.size() || pts[i].component != pts[start].component) {
      out.push_back({start, i});
      start = i;
    }
  }
  return out;
}

std::vector<Polygon> full_curves(const WavefrontSlice& slice, const std::vector<Range>& ranges) {
  std::vector<Polygon> curves;
  for (const auto& r : ranges) {
    Polygon poly;
    for (std::size_t i = r.begin; i < r.end; ++i) poly.push_back(slice.points[i].x);
    curves.push_back(std::move(poly));
  }
  return curves;
}

std::vector<Polygon> component_active_polylines(const WavefrontSlice& slice, const std::vector<Range>& ranges) {
  std::vector<Polygon> out;
  for (const auto& r : ranges) {
    Polygon poly;
    for (std::size_t i = r.begin; i < r.end; ++i)
      if (slice.points[i].active) poly.push_back(slice.points[i].x);
    if (poly.size() >= 3) out.push_back(std::move(poly));
  }
  return out;
}

double orientation_of(const Polygon& curve) { return signed_area(curve) >= 0.0 ? 1.0 : -1.0; }

void trim_slice(WavefrontSlice& slice) {
  const auto ranges = component_ranges(slice.points);
  if (find_crossings(component_active_polylines(slice, ranges)).empty()) return;

  const std::vector<Polygon> curves = full_curves(slice, ranges);
  std::vector<char> swallowed(slice.points.size(), 0);
  for (std::size_t c = 0; c < ranges.size(); ++c) {
    const Range& r = ranges[c];
    if (r.size() < 3) continue;
    const double sign = orientation_of(curves[c]);
    for (std::size_t i = r.begin; i < r.end; ++i) {
      if (!slice.points[i].active) continue;
      const Vec2 chord = slice.points[r.next(i)].x - slice.points[r.prev(i)].x;
      const double len = chord.norm();
      if (!(len > 0.0)) continue;
      // Nudge the point off its own curve along the outward normal; it is
      // swallowed when the nudged point is still enclosed by some curve.
      const Vec2 normal = sign * Vec2(chord[1], -chord[0]) / len;
      const double eps = 1e-6 * len;
      const Vec2 probe = slice.points[i].x + eps * normal;
      for (const auto& curve : curves) {
        if (winding_number(probe, curve) != 0 && distance_to_closed(probe, curve) > 0.25 * eps) {
          swallowed[i] = 1;
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < slice.points.size(); ++i)
    if (swallowed[i]) {
      slice.points[i].active = false;
      slice.points[i].cut = true;
    }
}

void validate_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw ArgumentError("t_grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw ArgumentError("t_grid entries must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ArgumentError("t_grid must be strictly increasing");
  }
}

SlicePoint sample_point(const SeedPoint& seed, const GeodesicTrace& trace, double tau) {
  SlicePoint sp;
  sp.seed_index = seed.index;
  sp.component = seed.component;
  if (trace.samples.back().tau + 1e-12 >= tau) {
    sp.x = interpolate(trace, std::min(tau, trace.samples.back().tau)).point.x;
  } else {
    sp.x = trace.samples.back().point.x;
    sp.active = false;
  }
  return sp;
}

// Builds slices from traces, trims them and records the first cut time.
void assemble(WavefrontResult& r) {
  r.slices.clear();
  for (double tau : r.t_grid) {
    WavefrontSlice s;
    s.tau = tau;
    s.points.reserve(r.seeds.size());
    for (std::size_t i = 0; i < r.seeds.size(); ++i) s.points.push_back(sample_point(r.seeds[i], r.traces[i], tau));
    r.slices.push_back(std::move(s));
  }
  r.slices = detect_cut_and_trim(std::move(r.slices));
  r.first_cut_time.reset();
  for (const auto& s : r.slices)
    if (s.cut_count() > 0) {
      r.first_cut_time = s.tau;
      break;
    }
}

std::vector<GeodesicTrace> integrate_all(const MetricModel& m, const std::vector<SeedPoint>& seeds, double horizon,
                                         double dt_step, Execution exec) {
  std::vector<GeodesicTrace> traces(seeds.size());
  const auto body = [&](std::ptrdiff_t i) {
    traces[i] = integrate_geodesic(m, seeds[i].p, seeds[i].N, horizon, dt_step, seeds[i].index);
  };
  const auto n = static_cast<std::ptrdiff_t>(seeds.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 2)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
  return traces;
}

void collect_failures(WavefrontResult& r) {
  r.failures.clear();
  for (const auto& t : r.traces) {
    if (t.end == TraceEnd::failure)
      r.failures.push_back("seed " + std::to_string(t.seed_index) + ": " + t.failure);
    else if (t.end == TraceEnd::domain_exit)
      r.failures.push_back("seed " + std::to_string(t.seed_index) + ": left the metric domain at t=" +
                           std::to_string(t.t_end()));
  }
}

}  // namespace

std::size_t WavefrontSlice::active_count() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SlicePoint& p) { return p.active; }));
}

std::size_t WavefrontSlice::cut_count() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SlicePoint& p) { return p.cut; }));
}

WavefrontSlice seed_slice(const std::vector<SeedPoint>& seeds) {
  WavefrontSlice s;
  s.tau = 0.0;
  for (const auto& seed : seeds) s.points.push_back({seed.index, seed.component, seed.p.x, true, false});
  return s;
}

WavefrontResult propagate(const MetricModel& m, std::vector<SeedPoint> seeds, std::span<const double> t_grid,
                          double dt_step, Execution exec) {
  validate_grid(t_grid);
  if (seeds.empty()) throw ArgumentError("propagate: no seeds");
  for (const auto& s : seeds)
    if (!s.lifted) throw ArgumentError("propagate: seed " + std::to_string(s.index) + " is not lifted");
  WavefrontResult r;
  r.t_grid.assign(t_grid.begin(), t_grid.end());
  r.dt_step = dt_step;
  r.traces = integrate_all(m, seeds, t_grid.back(), dt_step, exec);
  r.seeds = std::move(seeds);
  collect_failures(r);
  assemble(r);
  return r;
}

WavefrontResult propagate_boundary(const MetricModel& m, const std::vector<Polygon>& components,
                                   std::span<const double> t_grid, double dt_step, Execution exec) {
  std::vector<SeedPoint> seeds;
  std::vector<SeedCurve> curves;
  for (std::size_t c = 0; c < components.size(); ++c) {
    auto lifted = lift_front(m, components[c], Orientation::automatic, 0.0, static_cast<int>(c),
                             static_cast<int>(seeds.size()));
    curves.push_back({static_cast<int>(c), PeriodicSpline(components[c]), resolve_orientation(components[c], Orientation::automatic)});
    seeds.insert(seeds.end(), lifted.begin(), lifted.end());
  }
  WavefrontResult r = propagate(m, std::move(seeds), t_grid, dt_step, exec);
  r.curves = std::move(curves);
  return r;
}

std::vector<WavefrontSlice> detect_cut_and_trim(std::vector<WavefrontSlice> slices) {
  for (std::size_t k = 0; k < slices.size(); ++k) {
    if (k > 0) {
      if (slices[k].points.size() != slices[k - 1].points.size())
        throw ArgumentError("detect_cut_and_trim: slices have different point counts");
      if (!(slices[k].tau > slices[k - 1].tau)) throw ArgumentError("detect_cut_and_trim: tau must increase");
      // A geodesic past its cut point never returns to the boundary.
      for (std::size_t i = 0; i < slices[k].points.size(); ++i)
        if (slices[k - 1].points[i].cut) {
          slices[k].points[i].cut = true;
          slices[k].points[i].active = false;
        }
    }
    trim_slice(slices[k]);
  }
  return slices;
}

std::vector<Polygon> active_loops(const WavefrontSlice& slice) {
  struct Arc {
    std::vector<Vec2> pts;
    // Inactive neighbours just before the first and after the last point.
    Vec2 before, after;
  };
  std::vector<Arc> arcs;
  std::vector<Polygon> loops;
  for (const auto& r : component_ranges(slice.points)) {
    const auto active = [&](std::size_t i) { return slice.points[i].active; };
    std::size_t n_active = 0;
    for (std::size_t i = r.begin; i < r.end; ++i) n_active += active(i);
    if (n_active == 0) continue;
    if (n_active == r.size()) {
      Polygon p;
      for (std::size_t i = r.begin; i < r.end; ++i) p.push_back(slice.points[i].x);
      loops.push_back(std::move(p));
      continue;
    }
    // Start right after an inactive point so runs do not wrap.
    std::size_t start = r.begin;
    while (active(start)) start = r.next(start);
    std::size_t i = r.next(start);
    for (std::size_t step = 0; step < r.size(); ++step, i = r.next(i)) {
      if (!active(i)) continue;
      if (!active(r.prev(i))) arcs.push_back({{}, slice.points[r.prev(i)].x, Vec2::Zero()});
      arcs.back().pts.push_back(slice.points[i].x);
      if (!active(r.next(i))) arcs.back().after = slice.points[r.next(i)].x;
    }
  }
  std::vector<char> used(arcs.size(), 0);
  for (std::size_t first = 0; first < arcs.size(); ++first) {
    if (used[first]) continue;
    Polygon loop;
    std::size_t cur = first;
    while (true) {
      used[cur] = 1;
      loop.insert(loop.end(), arcs[cur].pts.begin(), arcs[cur].pts.end());
      const Vec2& tail = arcs[cur].pts.back();
      std::size_t best = first;
      double best_d = (arcs[first].pts.front() - tail).norm();
      for (std::size_t j = 0; j < arcs.size(); ++j) {
        if (used[j]) continue;
        const double d = (arcs[j].pts.front() - tail).norm();
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      // The cusp sits where the segments leaving the two runs cross.
      const Vec2 d1 = arcs[cur].after - tail, d2 = arcs[best].pts.front() - arcs[best].before;
      const double den = d1[0] * d2[1] - d1[1] * d2[0];
      if (den != 0.0) {
        const Vec2 w = arcs[best].before - tail;
        const double a = (w[0] * d2[1] - w[1] * d2[0]) / den, b = (w[0] * d1[1] - w[1] * d1[0]) / den;
        if (a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) loop.push_back(tail + a * d1);
      }
      if (best == first) break;
      cur = best;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

bool slice_is_simple(const WavefrontSlice& slice) {
  const auto loops = active_loops(slice);
  for (const auto& l : loops)
    if (l.size() < 3) return false;
  return find_crossings(loops).empty();
}

WavefrontSlice slice_at_t(const WavefrontResult& result, double tau) {
  if (result.slices.empty()) throw ArgumentError("slice_at_t: empty result");
  if (!(tau >= 0.0 && tau <= result.t_grid.back() + 1e-12))
    throw ArgumentError("slice_at_t: tau outside the propagated range");
  std::size_t k = 0;
  while (k + 1 < result.t_grid.size() && result.t_grid[k] < tau - 1e-12) ++k;
  const WavefrontSlice& ref = result.slices[k];
  WavefrontSlice out;
  out.tau = tau;
  out.closed = ref.closed;
  for (std::size_t i = 0; i < result.seeds.size(); ++i) {
    SlicePoint sp = sample_point(result.seeds[i], result.traces[i], tau);
    sp.active = sp.active && ref.points[i].active;
    sp.cut = ref.points[i].cut;
    out.points.push_back(sp);
  }
  return out;
}

double max_active_gap(const WavefrontSlice& slice) {
  double worst = 0.0;
  for (const auto& r : component_ranges(slice.points)) {
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const std::size_t j = r.next(i);
      if (slice.points[i].active && slice.points[j].active)
        worst = std::max(worst, (slice.points[j].x - slice.points[i].x).norm());
    }
  }
  return worst;
}

WavefrontResult refine_front(const MetricModel& m, const WavefrontResult& input, double max_gap, RefineReport* report) {
  if (!(max_gap > 0.0)) throw ArgumentError("refine_front: max_gap must be positive");
  if (input.curves.empty()) throw ArgumentError("refine_front: the seed splines were not retained");
  WavefrontResult r = input;
  RefineReport rep;
  rep.max_gap_before = max_active_gap(r.slices.back());
  const auto find_curve = [&](int component) -> const SeedCurve& {
    for (const auto& c : r.curves)
      if (c.component == component) return c;
    throw ArgumentError("refine_front: no spline for component " + std::to_string(component));
  };

  for (int iteration = 0;; ++iteration) {
    const WavefrontSlice& last = r.slices.back();
    const auto ranges = component_ranges(last.points);
    std::vector<SeedPoint> fresh;
    for (const auto& range : ranges) {
      const SeedCurve& curve = find_curve(last.points[range.begin].component);
      const double period = curve.spline.period();
      std::vector<double> params;
      for (std::size_t i = range.begin; i < range.end; ++i) {
        const std::size_t j = range.next(i);
        if (!(last.points[i].active && last.points[j].active)) continue;
        if ((last.points[j].x - last.points[i].x).norm() <= max_gap) continue;
        double a = r.seeds[i].parameter, b = r.seeds[j].parameter;
        if (b <= a) b += period;
        params.push_back(std::fmod(0.5 * (a + b), period));
      }
      if (params.empty()) continue;
      auto lifted = lift_spline_points(m, curve.spline, params, curve.orientation_sign, r.seeds.front().p.t,
                                       curve.component, 0);
      fresh.insert(fresh.end(), lifted.begin(), lifted.end());
    }
    if (fresh.empty()) break;
    if (iteration == kRefineIterationCap) {
      rep.converged = false;
      r.warnings.push_back("refine_front: iteration cap reached; refinement is partial");
      break;
    }
    rep.iterations = iteration + 1;
    rep.inserted += fresh.size();

    auto fresh_traces = integrate_all(m, fresh, r.t_grid.back(), r.dt_step, Execution::parallel);
    std::vector<std::size_t> order(r.seeds.size() + fresh.size());
    std::iota(order.begin(), order.end(), 0);
    const auto seed_at = [&](std::size_t k) -> const SeedPoint& {
      return k < r.seeds.size() ? r.seeds[k] : fresh[k - r.seeds.size()];
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const SeedPoint& sa = seed_at(a);
      const SeedPoint& sb = seed_at(b);
      return sa.component < sb.component || (sa.component == sb.component && sa.parameter < sb.parameter);
    });
    std::vector<SeedPoint> seeds;
    std::vector<GeodesicTrace> traces;
    for (std::size_t k : order) {
      seeds.push_back(seed_at(k));
      traces.push_back(k < r.traces.size() ? std::move(r.traces[k]) : std::move(fresh_traces[k - r.seeds.size()]));
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      seeds[i].index = static_cast<int>(i);
      traces[i].seed_index = static_cast<int>(i);
    }
    r.seeds = std::move(seeds);
    r.traces = std::move(traces);
    collect_failures(r);
    assemble(r);
  }
  rep.max_gap_after = max_active_gap(r.slices.back());
  if (report) *report = rep;
  return r;
}

}  // namespace conewave
