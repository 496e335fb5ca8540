#pragma once

#include "conewave/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace conewave {

using Polygon = std::vector<Vec2>;

double signed_area(std::span<const Vec2> closed);

// Twice the signed area of triangle (a, b, c).
inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// True when segments [a, b] and [c, d] cross at a single interior point.
// Touching or collinear configurations whose orientation determinants fall
// within `tol` are not crossings.
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol = 1e-12);

struct SegmentCrossing {
  // Segment k of a closed polyline joins vertex k to vertex k + 1 (mod size).
  int loop_a, segment_a;
  int loop_b, segment_b;
};

// All proper crossings among the segments of a set of closed polylines,
// excluding pairs of adjacent segments of the same loop.
std::vector<SegmentCrossing> find_crossings(const std::vector<Polygon>& loops, double tol = 1e-12);

bool is_simple_closed(const Polygon& loop, double tol = 1e-12);

// Winding number of a closed polyline around q.
int winding_number(const Vec2& q, std::span<const Vec2> closed);
// Non-zero winding with respect to any loop.
bool inside_any(const Vec2& q, const std::vector<Polygon>& loops);

double distance_to_segment(const Vec2& q, const Vec2& a, const Vec2& b);
double distance_to_closed(const Vec2& q, std::span<const Vec2> closed);

// Lattice nodes (i, j) at origin + (i, j) * spacing, i < nx, j < ny, that are
// inside the union of the loops (non-zero rule), as a row-major mask.
std::vector<char> rasterize(const std::vector<Polygon>& loops, const Vec2& origin, double spacing, int nx, int ny);

}  // namespace conewave
