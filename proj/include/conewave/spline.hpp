#pragma once

#include "conewave/types.hpp"

#include <vector>

namespace conewave {

// Interpolating periodic cubic spline through the vertices of a closed
// polygon, parametrized by cumulative chord length.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(std::vector<Vec2> vertices);

  std::size_t size() const { return points_.size(); }
  double period() const { return knots_.back(); }
  // Parameter of vertex i (0 <= i < size()).
  double knot(std::size_t i) const { return knots_[i]; }
  const std::vector<Vec2>& vertices() const { return points_; }

  Vec2 position(double u) const;
  Vec2 derivative(double u) const;

 private:
  std::size_t segment(double& u) const;

  std::vector<Vec2> points_;
  std::vector<double> knots_;  // size n + 1; knots_[n] is the period
  std::vector<Vec2> second_;   // second derivatives at the knots
};

}  // namespace conewave
