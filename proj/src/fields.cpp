#include "conewave/fields.hpp"

#include <algorithm>
#include <cmath>

namespace conewave {

ScalarField ScalarField::constant(double value) {
  ScalarField f;
  f.kind_ = Kind::constant;
  f.value_ = value;
  return f;
}

ScalarField ScalarField::affine(double value, Vec2 gradient, double rate) {
  ScalarField f;
  f.kind_ = Kind::affine;
  f.value_ = value;
  f.gradient_ = std::move(gradient);
  f.rate_ = rate;
  return f;
}

ScalarField ScalarField::table(FieldTable table) {
  if (table.nx < 2 || table.ny < 2)
    throw ConfigurationError("table", "needs at least 2x2 samples");
  if (static_cast<std::size_t>(table.nx) * table.ny != table.values.size())
    throw ConfigurationError("table", "values size does not match shape");
  if (!(table.spacing[0] > 0.0 && table.spacing[1] > 0.0))
    throw ConfigurationError("table", "spacing must be positive");
  ScalarField f;
  f.kind_ = Kind::table;
  f.table_ = std::move(table);
  return f;
}

bool ScalarField::contains(const Vec2& x) const {
  if (kind_ != Kind::table) return true;
  const auto& tb = *table_;
  return x[0] >= tb.lower(0) && x[0] <= tb.upper(0) && x[1] >= tb.lower(1) && x[1] <= tb.upper(1);
}

namespace {

struct Cell {
  int i, j;
  double fx, fy;
};

// Locates the bilinear cell; points outside the table are clamped to the
// boundary cell, which extrapolates linearly.
Cell locate(const FieldTable& tb, const Vec2& x) {
  const double gx = (x[0] - tb.origin[0]) / tb.spacing[0];
  const double gy = (x[1] - tb.origin[1]) / tb.spacing[1];
  const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, tb.nx - 2);
  const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, tb.ny - 2);
  return {i, j, gx - i, gy - j};
}

}  // namespace

double ScalarField::value(const SpacetimePoint& p) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::affine:
      return value_ + gradient_.dot(p.x) + rate_ * p.t;
    case Kind::table: {
      const auto& tb = *table_;
      const Cell c = locate(tb, p.x);
      const auto at = [&](int di, int dj) { return tb.values[(c.j + dj) * tb.nx + c.i + di]; };
      return (1 - c.fx) * (1 - c.fy) * at(0, 0) + c.fx * (1 - c.fy) * at(1, 0) +
             (1 - c.fx) * c.fy * at(0, 1) + c.fx * c.fy * at(1, 1);
    }
  }
  return value_;
}

Vec3 ScalarField::gradient(const SpacetimePoint& p) const {
  switch (kind_) {
    case Kind::constant:
      return Vec3::Zero();
    case Kind::affine:
      return {rate_, gradient_[0], gradient_[1]};
    case Kind::table: {
      const auto& tb = *table_;
      const Cell c = locate(tb, p.x);
      const auto at = [&](int di, int dj) { return tb.values[(c.j + dj) * tb.nx + c.i + di]; };
      const double ddx = ((1 - c.fy) * (at(1, 0) - at(0, 0)) + c.fy * (at(1, 1) - at(0, 1))) / tb.spacing[0];
      const double ddy = ((1 - c.fx) * (at(0, 1) - at(0, 0)) + c.fx * (at(1, 1) - at(1, 0))) / tb.spacing[1];
      return {0.0, ddx, ddy};
    }
  }
  return Vec3::Zero();
}

}  // namespace conewave
