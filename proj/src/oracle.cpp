#include "conewave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace conewave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCoarseDirections = 16;
constexpr int kGoldenIterations = 10;
constexpr int kReferenceDirections = 360;
constexpr int kTableDirections = 720;
constexpr int kEventVertices = 64;

// Signed Euclidean distance to the union of the loops, negative inside.
std::vector<double> signed_distance(const std::vector<Polygon>& loops, const LatticeSpec& g,
                                    const std::vector<char>& inside, Execution exec) {
  std::vector<double> phi(g.size());
  const auto n_total = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (std::ptrdiff_t n = 0; n < n_total; ++n) {
    const Vec2 x = g.node(static_cast<int>(n % g.nx), static_cast<int>(n / g.nx));
    double d = kInf;
    for (const auto& l : loops) d = std::min(d, distance_to_closed(x, l));
    phi[n] = inside[n] ? -d : d;
  }
  return phi;
}

// Layered dilation of the sublevel set {phi <= 0}: each layer replaces phi(x)
// by its minimum over the backward one-layer cone exit set at x.
class Dilation {
 public:
  Dilation(const MetricModel& m, const LatticeSpec& grid, const OracleOptions& o, double t0, bool dense)
      : m_(m), g_(grid), o_(o), dense_(dense), homogeneous_(m.is_homogeneous()) {
    if (grid.nx < 2 || grid.ny < 2 || !(grid.dx > 0.0)) throw ConfigurationError("oracle", "lattice needs at least 2x2 nodes");
    if (!(o.dt_layer > 0.0)) throw ConfigurationError("oracle/dt_layer", "must be positive");
    if (o.neighborhood_radius < 1) throw ConfigurationError("oracle/neighborhood_radius", "must be at least 1");
    double vmax = 0.0;
    const bool time_dep = m.is_time_dependent();
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) {
        vmax = std::max(vmax, m_.max_speed({t0, g_.node(i, j)}));
        if (time_dep && std::isfinite(o.t_max)) vmax = std::max(vmax, m_.max_speed({o.t_max, g_.node(i, j)}));
        if (homogeneous_ && !time_dep) break;
      }
    stats_.max_speed = vmax;
    const double reach = o.neighborhood_radius * g_.dx;
    if (vmax * o.dt_layer > reach * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "cone clipping: max speed " << vmax << " times dt_layer " << o.dt_layer << " exceeds neighborhood "
         << reach;
      throw ConfigurationError("oracle", os.str());
    }
    const int n_dir = dense_ ? kReferenceDirections : kCoarseDirections;
    for (int k = 0; k < n_dir; ++k) {
      const double a = 2.0 * std::numbers::pi * k / n_dir;
      dirs_.emplace_back(std::cos(a), std::sin(a));
    }
    if (homogeneous_ && !dense_)
      for (int k = 0; k < kTableDirections; ++k) {
        const double a = 2.0 * std::numbers::pi * k / kTableDirections;
        table_.push_back(step(Vec2::Zero(), t0, Vec2(std::cos(a), std::sin(a))));
      }
    if (!table_.empty()) table_.push_back(table_.front());
    inv_dx_ = 1.0 / g_.dx;
  }

  // Displacement over [t, t + dt] of the lightlike ray with medium-relative
  // direction u that ends at x, evaluated at the midpoint state.
  Vec2 step(const Vec2& x, double t, const Vec2& u) const {
    const double dt = o_.dt_layer, th = t + 0.5 * dt;
    const SpacetimePoint p(th, x);
    const Vec2 y0 = m_.fiber_center(p) + m_.fiber_radius(p, u) * u;
    if (homogeneous_) return dt * y0;
    const SpacetimePoint q(th, x - 0.5 * dt * y0);
    return dt * (m_.fiber_center(q) + m_.fiber_radius(q, u) * u);
  }

  double lookup(const std::vector<double>& phi, const Vec2& y) const {
    const double u = std::clamp((y[0] - g_.origin[0]) * inv_dx_, 0.0, g_.nx - 1.0);
    const double v = std::clamp((y[1] - g_.origin[1]) * inv_dx_, 0.0, g_.ny - 1.0);
    const int i = std::min(static_cast<int>(u), g_.nx - 2), j = std::min(static_cast<int>(v), g_.ny - 2);
    const double fu = u - i, fv = v - j;
    const std::size_t n = g_.index(i, j);
    return (1 - fu) * (1 - fv) * phi[n] + fu * (1 - fv) * phi[n + 1] + (1 - fu) * fv * phi[n + g_.nx] +
           fu * fv * phi[n + g_.nx + 1];
  }

  double update(const std::vector<double>& phi, const Vec2& x, double t) const {
    if (!table_.empty()) {
      // Steps between table entries are interpolated linearly.
      const int n = kTableDirections;
      const auto value = [&](double k) {
        if (k < 0.0) k += n;
        if (k >= n) k -= n;
        const int i = std::min(static_cast<int>(k), n - 1);
        const double w = k - i;
        return lookup(phi, x - ((1.0 - w) * table_[i] + w * table_[i + 1]));
      };
      return refine(value, n / static_cast<double>(dirs_.size()));
    }
    const auto value = [&](double th) { return lookup(phi, x - step(x, t, Vec2(std::cos(th), std::sin(th)))); };
    if (dense_) {
      double best = kInf;
      for (const Vec2& u : dirs_) best = std::min(best, lookup(phi, x - step(x, t, u)));
      return best;
    }
    return refine(value, 2.0 * std::numbers::pi / dirs_.size());
  }

  // Coarse sweep of f over a uniform grid of spacing h, then golden-section
  // search within one spacing of the best sample.
  template <class F>
  double refine(const F& f, double h) const {
    double best = kInf;
    std::size_t kbest = 0;
    for (std::size_t k = 0; k < dirs_.size(); ++k) {
      const double v = f(h * k);
      if (v < best) {
        best = v;
        kbest = k;
      }
    }
    constexpr double r = 0.6180339887498949;
    double a = h * kbest - h, b = h * kbest + h;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = f(d);
      }
    }
    return std::min({best, fc, fd});
  }

  int lookups_per_node() const {
    return static_cast<int>(dirs_.size()) + (dense_ ? 0 : kGoldenIterations + 2);
  }

  // Advances phi layer by layer from t_start, recording the first time each
  // node enters the set. Entries of T that are already finite stay fixed.
  void run(std::vector<double> phi, double t_start, std::vector<double>& T, std::vector<double>& exit) {
    const double dt = o_.dt_layer;
    const auto n_total = static_cast<std::ptrdiff_t>(g_.size());
    const double diag = g_.dx * std::hypot(g_.nx - 1.0, g_.ny - 1.0);
    const std::uint64_t stall_limit =
        stats_.max_speed > 0.0 ? static_cast<std::uint64_t>(std::ceil(diag / (stats_.max_speed * dt))) + 1 : 1;
    std::uint64_t stall = 0;
    std::vector<double> next(g_.size());
    const bool parallel = o_.exec == Execution::parallel && !dense_;
    double t = t_start;
    for (;;) {
      if (std::isfinite(o_.t_max)) {
        if (t >= o_.t_max - 1e-9 * dt) break;
      } else {
        if (std::none_of(T.begin(), T.end(), [](double v) { return !std::isfinite(v); })) break;
        if (stall > stall_limit) break;
      }
      std::ptrdiff_t reached = 0;
#pragma omp parallel for schedule(static) reduction(+ : reached) if (parallel)
      for (std::ptrdiff_t n = 0; n < n_total; ++n) {
        const Vec2 x = g_.node(static_cast<int>(n % g_.nx), static_cast<int>(n / g_.nx));
        next[n] = update(phi, x, t);
        if (!std::isfinite(T[n])) {
          if (next[n] <= 0.0) {
            const double w = phi[n] > 0.0 ? phi[n] / (phi[n] - next[n]) : 0.0;
            T[n] = t + dt * w;
            ++reached;
          }
        } else if (!std::isfinite(exit[n]) && phi[n] <= 0.0 && next[n] > 0.0) {
          exit[n] = t + dt * (-phi[n] / (next[n] - phi[n]));
        }
      }
      phi.swap(next);
      t += dt;
      ++stats_.layers;
      stall = reached > 0 ? 0 : stall + 1;
    }
    stats_.lookups = stats_.layers * g_.size() * static_cast<std::uint64_t>(lookups_per_node());
    if (std::isfinite(o_.t_max))
      for (std::size_t n = 0; n < T.size(); ++n)
        if (T[n] > o_.t_max) T[n] = exit[n] = kInf;
  }

  ArrivalField field(std::vector<double> T, std::vector<double> exit, std::vector<char> source) const {
    ArrivalField f;
    f.grid = g_;
    f.dt_layer = o_.dt_layer;
    f.neighborhood_radius = o_.neighborhood_radius;
    f.times = std::move(T);
    f.exit_times = std::move(exit);
    f.source = std::move(source);
    f.stats = stats_;
    return f;
  }

 private:
  const MetricModel& m_;
  LatticeSpec g_;
  OracleOptions o_;
  bool dense_;
  bool homogeneous_;
  std::vector<Vec2> dirs_;
  std::vector<Vec2> table_;
  double inv_dx_ = 1.0;
  OracleStats stats_;
};

ArrivalField from_region(const MetricModel& m, const std::vector<Polygon>& S, const LatticeSpec& grid,
                         const OracleOptions& options, double t0, bool dense) {
  if (S.empty()) throw ArgumentError("earliest_arrival: empty source region");
  Dilation d(m, grid, options, t0, dense);
  std::vector<char> source = rasterize(S, grid.origin, grid.dx, grid.nx, grid.ny);
  std::vector<double> T(grid.size(), kInf), exit(grid.size(), kInf);
  for (std::size_t n = 0; n < T.size(); ++n)
    if (source[n]) T[n] = t0;
  d.run(signed_distance(S, grid, source, options.exec), t0, T, exit);
  return d.field(std::move(T), std::move(exit), std::move(source));
}

}  // namespace

LatticeSpec LatticeSpec::from_extents(const Vec2& lower, const Vec2& upper, double dx) {
  if (!(dx > 0.0)) throw ConfigurationError("oracle/dx", "must be positive");
  if (!(upper[0] > lower[0] && upper[1] > lower[1])) throw ConfigurationError("oracle/extents", "empty box");
  LatticeSpec g;
  g.origin = lower;
  g.dx = dx;
  g.nx = static_cast<int>(std::lround((upper[0] - lower[0]) / dx)) + 1;
  g.ny = static_cast<int>(std::lround((upper[1] - lower[1]) / dx)) + 1;
  return g;
}

bool LatticeSpec::contains(const Vec2& x) const {
  const Vec2 hi = upper();
  return x[0] >= origin[0] && x[1] >= origin[1] && x[0] <= hi[0] && x[1] <= hi[1];
}

double ArrivalField::sample(const Vec2& x) const {
  if (!grid.contains(x)) return kInf;
  const double u = (x[0] - grid.origin[0]) / grid.dx, v = (x[1] - grid.origin[1]) / grid.dx;
  const int i = std::clamp(static_cast<int>(std::floor(u)), 0, grid.nx - 2);
  const int j = std::clamp(static_cast<int>(std::floor(v)), 0, grid.ny - 2);
  const double fu = u - i, fv = v - j;
  const double t00 = time(i, j), t10 = time(i + 1, j), t01 = time(i, j + 1), t11 = time(i + 1, j + 1);
  if (!std::isfinite(t00) || !std::isfinite(t10) || !std::isfinite(t01) || !std::isfinite(t11)) return kInf;
  return (1 - fu) * (1 - fv) * t00 + fu * (1 - fv) * t10 + (1 - fu) * fv * t01 + fu * fv * t11;
}

double ArrivalField::exit_sample(const Vec2& x) const {
  if (!grid.contains(x)) return kInf;
  const int i = std::clamp(static_cast<int>(std::floor((x[0] - grid.origin[0]) / grid.dx)), 0, grid.nx - 2);
  const int j = std::clamp(static_cast<int>(std::floor((x[1] - grid.origin[1]) / grid.dx)), 0, grid.ny - 2);
  const std::size_t n = grid.index(i, j);
  return std::min({exit_times[n], exit_times[n + 1], exit_times[n + grid.nx], exit_times[n + grid.nx + 1]});
}

bool ArrivalField::strictly_inside(const Vec2& x, double tau, double margin) const {
  return sample(x) < tau - margin && exit_sample(x) > tau + margin;
}

std::size_t ArrivalField::unreachable_count() const {
  return static_cast<std::size_t>(std::count_if(times.begin(), times.end(), [](double t) { return !std::isfinite(t); }));
}

ArrivalField earliest_arrival(const MetricModel& m, const std::vector<Polygon>& S, const LatticeSpec& grid,
                              const OracleOptions& options, double t0) {
  return from_region(m, S, grid, options, t0, false);
}

ArrivalField earliest_arrival_reference(const MetricModel& m, const std::vector<Polygon>& S,
                                        const LatticeSpec& grid, const OracleOptions& options, double t0) {
  return from_region(m, S, grid, options, t0, true);
}

ArrivalField earliest_arrival_from_event(const MetricModel& m, const Vec2& x, double t0, const LatticeSpec& grid,
                                         const OracleOptions& options) {
  if (!grid.contains(x)) throw ArgumentError("earliest_arrival_from_event: event is off the lattice");
  Dilation d(m, grid, options, t0, false);
  // Start from the exact cone section a couple of layers after the event so
  // the set is wider than one layer step.
  const double delta = 2.0 * options.dt_layer;
  const SpacetimePoint p(t0, x);
  Polygon section;
  for (int k = 0; k < kEventVertices; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kEventVertices;
    const Vec2 u(std::cos(a), std::sin(a));
    section.push_back(x + delta * (m.fiber_center(p) + m.fiber_radius(p, u) * u));
  }
  const std::vector<Polygon> loops{section};
  std::vector<char> source = rasterize(loops, grid.origin, grid.dx, grid.nx, grid.ny);
  std::vector<double> T(grid.size(), kInf), exit(grid.size(), kInf);
  for (std::size_t n = 0; n < T.size(); ++n)
    if (source[n]) {
      const Vec2 y = grid.node(static_cast<int>(n % grid.nx), static_cast<int>(n / grid.nx));
      T[n] = t0 + std::min(delta, m.earliest_traversal_time(p, y - x));
    }
  d.run(signed_distance(loops, grid, source, options.exec), t0 + delta, T, exit);
  return d.field(std::move(T), std::move(exit), std::move(source));
}

AchronalityReport achronality_check(const MetricModel& m, const ArrivalField& field, const WavefrontResult& result,
                                    const AchronalityOptions& options) {
  AchronalityReport rep;
  rep.margin = options.margin > 0.0 ? options.margin : field.grid.dx + field.dt_layer;
  const auto note = [&](const ArrivalField& f, double tau, int seed, int other, const Vec2& x) {
    const double t = f.sample(x);
    if (!(f.exit_sample(x) > tau + rep.margin)) return;
    rep.worst_slack = std::min(rep.worst_slack, t - (tau - rep.margin));
    if (f.strictly_inside(x, tau, rep.margin)) rep.violations.push_back({seed, other, tau, x, t});
  };
  for (const auto& slice : result.slices)
    for (const SlicePoint& p : slice.points) {
      if (!p.active) continue;
      if (!field.grid.contains(p.x)) {
        ++rep.off_grid;
        continue;
      }
      ++rep.checked;
      note(field, slice.tau, p.seed_index, -1, p.x);
    }
  if (options.pair_samples <= 0 || result.slices.size() < 2) return rep;

  const std::size_t k0 = result.slices.size() / 3;
  const WavefrontSlice& base = result.slices[k0];
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < base.points.size(); ++i)
    if (base.points[i].active && field.grid.contains(base.points[i].x)) active.push_back(i);
  if (active.empty()) return rep;

  OracleOptions o;
  o.dt_layer = field.dt_layer;
  o.neighborhood_radius = field.neighborhood_radius;
  o.t_max = result.slices.back().tau;
  const std::size_t n_pairs = std::min<std::size_t>(options.pair_samples, active.size());
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const SlicePoint& a = base.points[active[k * active.size() / n_pairs]];
    // Only the part of the lattice the event's cone can reach by the last slice.
    const LatticeSpec& g = field.grid;
    const double reach = field.stats.max_speed * (o.t_max - base.tau) + 2.0 * g.dx;
    const auto lo = [&](int axis, int n) {
      return std::clamp(static_cast<int>(std::floor((a.x[axis] - reach - g.origin[axis]) / g.dx)), 0, n - 2);
    };
    const auto hi = [&](int axis, int n, int low) {
      return std::clamp(static_cast<int>(std::ceil((a.x[axis] + reach - g.origin[axis]) / g.dx)), low + 1, n - 1);
    };
    const int i0 = lo(0, g.nx), j0 = lo(1, g.ny);
    LatticeSpec sub;
    sub.origin = g.node(i0, j0);
    sub.dx = g.dx;
    sub.nx = hi(0, g.nx, i0) - i0 + 1;
    sub.ny = hi(1, g.ny, j0) - j0 + 1;
    const ArrivalField from_a = earliest_arrival_from_event(m, a.x, base.tau, sub, o);
    for (std::size_t s = k0 + 1; s < result.slices.size(); ++s)
      for (const SlicePoint& b : result.slices[s].points) {
        if (!b.active || b.seed_index == a.seed_index || !field.grid.contains(b.x)) continue;
        ++rep.pairs_checked;
        note(from_a, result.slices[s].tau, b.seed_index, a.seed_index, b.x);
      }
  }
  return rep;
}

std::vector<double> front_arrival_times(const WavefrontResult& result, const LatticeSpec& grid,
                                        const std::vector<char>& source) {
  const std::size_t N = grid.size();
  std::vector<int> first(N, -1);
  std::vector<std::vector<Polygon>> loops;
  loops.push_back(active_loops(seed_slice(result.seeds)));
  for (const auto& s : result.slices) loops.push_back(active_loops(s));
  std::vector<double> taus{0.0};
  for (const auto& s : result.slices) taus.push_back(s.tau);

  for (std::size_t k = 1; k < loops.size(); ++k) {
    const auto mask = rasterize(loops[k], grid.origin, grid.dx, grid.nx, grid.ny);
    for (std::size_t n = 0; n < N; ++n)
      if (first[n] < 0 && mask[n]) first[n] = static_cast<int>(k);
  }
  const auto dist = [](const Vec2& x, const std::vector<Polygon>& ls) {
    double d = kInf;
    for (const auto& l : ls) d = std::min(d, distance_to_closed(x, l));
    return d;
  };
  std::vector<double> out(N, kInf);
  const auto n_total = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t n = 0; n < n_total; ++n) {
    if (source[n]) {
      out[n] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const int k = first[n];
    if (k < 0) continue;
    const Vec2 x = grid.node(static_cast<int>(n % grid.nx), static_cast<int>(n / grid.nx));
    const double d0 = dist(x, loops[k - 1]), d1 = dist(x, loops[k]);
    const double w = d0 + d1 > 0.0 ? d0 / (d0 + d1) : 1.0;
    out[n] = taus[k - 1] + (taus[k] - taus[k - 1]) * w;
  }
  return out;
}

ComparisonReport compare_front_to_oracle(const ArrivalField& field, const WavefrontResult& result,
                                         const ComparisonOptions& options) {
  ComparisonReport rep;
  rep.dx = field.grid.dx;
  rep.dt_layer = field.dt_layer;
  rep.tolerance_factor = options.tolerance_factor;
  const double tol = options.tolerance_factor * (rep.dx + rep.dt_layer);
  const double t_last = result.t_grid.back();
  const auto front = front_arrival_times(result, field.grid, field.source);
  std::vector<double> diffs;
  for (std::size_t n = 0; n < front.size(); ++n) {
    if (field.source[n]) continue;
    const double tf = front[n], to = field.times[n];
    const Vec2 x = field.grid.node(static_cast<int>(n % field.grid.nx), static_cast<int>(n / field.grid.nx));
    double d;
    if (std::isfinite(tf)) {
      if (!std::isfinite(to)) {
        const int i = static_cast<int>(n % field.grid.nx), j = static_cast<int>(n / field.grid.nx);
        double near = kInf;
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            const int a = i + di, b = j + dj;
            if (a < 0 || b < 0 || a >= field.grid.nx || b >= field.grid.ny) continue;
            const double tn = field.time(a, b);
            if (std::isfinite(tn)) near = std::min(near, std::abs(tf - tn));
          }
        if (near <= tol) {
          ++rep.boundary_grazing;
          if (near > rep.max_abs) rep.worst_node = x;
          rep.max_abs = std::max(rep.max_abs, near);
          diffs.push_back(near);
        } else {
          ++rep.front_only;
        }
        continue;
      }
      ++rep.compared;
      rep.max_front_late = std::max(rep.max_front_late, tf - to);
      rep.max_front_early = std::max(rep.max_front_early, to - tf);
      d = std::abs(tf - to);
    } else if (to < t_last) {
      d = t_last - to;
      if (d > tol) ++rep.front_missed;
      rep.max_front_late = std::max(rep.max_front_late, d);
    } else {
      continue;
    }
    if (d > rep.max_abs) rep.worst_node = x;
    rep.max_abs = std::max(rep.max_abs, d);
    diffs.push_back(d);
  }
  if (!diffs.empty()) {
    std::sort(diffs.begin(), diffs.end());
    const std::size_t idx = static_cast<std::size_t>(std::ceil(0.95 * diffs.size())) - 1;
    rep.p95_abs = diffs[std::min(idx, diffs.size() - 1)];
  }
  rep.observed_factor = rep.max_abs / (rep.dx + rep.dt_layer);
  rep.pass = rep.compared > 0 && rep.front_only == 0 && rep.front_missed == 0 && rep.max_abs <= tol;
  return rep;
}

}  // namespace conewave
