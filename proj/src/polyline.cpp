#include "conewave/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conewave {

double signed_area(std::span<const Vec2> closed) {
  double a = 0.0;
  const std::size_t n = closed.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = closed[i];
    const Vec2& q = closed[(i + 1) % n];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * a;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol) {
  if (std::max(a[0], b[0]) < std::min(c[0], d[0]) || std::max(c[0], d[0]) < std::min(a[0], b[0]) ||
      std::max(a[1], b[1]) < std::min(c[1], d[1]) || std::max(c[1], d[1]) < std::min(a[1], b[1]))
    return false;
  const double d1 = orient(a, b, c), d2 = orient(a, b, d);
  const double d3 = orient(c, d, a), d4 = orient(c, d, b);
  if (std::abs(d1) <= tol || std::abs(d2) <= tol || std::abs(d3) <= tol || std::abs(d4) <= tol) return false;
  return (d1 > 0) != (d2 > 0) && (d3 > 0) != (d4 > 0);
}

std::vector<SegmentCrossing> find_crossings(const std::vector<Polygon>& loops, double tol) {
  struct Seg {
    int loop, index;
    Vec2 a, b;
    double xmin, xmax;
  };
  std::vector<Seg> segs;
  for (int l = 0; l < static_cast<int>(loops.size()); ++l) {
    const int n = static_cast<int>(loops[l].size());
    if (n < 2) continue;
    for (int i = 0; i < n; ++i) {
      const Vec2& a = loops[l][i];
      const Vec2& b = loops[l][(i + 1) % n];
      segs.push_back({l, i, a, b, std::min(a[0], b[0]), std::max(a[0], b[0])});
    }
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) {
    return s.xmin < t.xmin || (s.xmin == t.xmin && (s.loop < t.loop || (s.loop == t.loop && s.index < t.index)));
  });
  std::vector<SegmentCrossing> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size() && segs[j].xmin <= segs[i].xmax; ++j) {
      const Seg& s = segs[i];
      const Seg& t = segs[j];
      if (s.loop == t.loop) {
        const int n = static_cast<int>(loops[s.loop].size());
        const int gap = std::abs(s.index - t.index);
        if (gap <= 1 || gap == n - 1) continue;
      }
      if (segments_cross(s.a, s.b, t.a, t.b, tol)) {
        SegmentCrossing c{s.loop, s.index, t.loop, t.index};
        if (std::make_pair(c.loop_b, c.segment_b) < std::make_pair(c.loop_a, c.segment_a)) {
          std::swap(c.loop_a, c.loop_b);
          std::swap(c.segment_a, c.segment_b);
        }
        out.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const SegmentCrossing& x, const SegmentCrossing& y) {
    return std::tie(x.loop_a, x.segment_a, x.loop_b, x.segment_b) <
           std::tie(y.loop_a, y.segment_a, y.loop_b, y.segment_b);
  });
  return out;
}

bool is_simple_closed(const Polygon& loop, double tol) {
  if (loop.size() < 3) return false;
  return find_crossings({loop}, tol).empty();
}

int winding_number(const Vec2& q, std::span<const Vec2> closed) {
  int wn = 0;
  const std::size_t n = closed.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = closed[i];
    const Vec2& b = closed[(i + 1) % n];
    if (a[1] <= q[1]) {
      if (b[1] > q[1] && orient(a, b, q) > 0) ++wn;
    } else {
      if (b[1] <= q[1] && orient(a, b, q) < 0) --wn;
    }
  }
  return wn;
}

bool inside_any(const Vec2& q, const std::vector<Polygon>& loops) {
  for (const auto& l : loops)
    if (winding_number(q, l) != 0) return true;
  return false;
}

double distance_to_segment(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double s = len2 > 0.0 ? (q - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (a + s * ab - q).norm();
}

double distance_to_closed(const Vec2& q, std::span<const Vec2> closed) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = closed.size();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, distance_to_segment(q, closed[i], closed[(i + 1) % n]));
  return best;
}

std::vector<char> rasterize(const std::vector<Polygon>& loops, const Vec2& origin, double spacing, int nx, int ny) {
  // Per-row signed crossings of each edge, accumulated as winding steps.
  std::vector<char> mask(static_cast<std::size_t>(nx) * ny, 0);
  std::vector<std::pair<double, int>> xs;
  for (int j = 0; j < ny; ++j) {
    const double y = origin[1] + j * spacing;
    xs.clear();
    for (const auto& loop : loops) {
      const std::size_t n = loop.size();
      for (std::size_t k = 0; k < n; ++k) {
        const Vec2& a = loop[k];
        const Vec2& b = loop[(k + 1) % n];
        const bool up = a[1] <= y && b[1] > y;
        const bool down = a[1] > y && b[1] <= y;
        if (!up && !down) continue;
        const double x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
        xs.emplace_back(x, up ? 1 : -1);
      }
    }
    if (xs.empty()) continue;
    std::sort(xs.begin(), xs.end());
    // The winding number at x is minus the sum of edge directions left of x.
    int running = 0;
    std::size_t e = 0;
    for (int i = 0; i < nx; ++i) {
      const double x = origin[0] + i * spacing;
      while (e < xs.size() && xs[e].first < x) running += xs[e++].second;
      if (running != 0) mask[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  }
  return mask;
}

}  // namespace conewave
