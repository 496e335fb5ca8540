#pragma once

#include "conewave/types.hpp"

#include <optional>
#include <vector>

namespace conewave {

// Bilinear sample grid over the spatial plane. Values are stored row-major
// with x1 varying fastest: values[j * nx + i] sits at origin + (i*dx1, j*dx2).
struct FieldTable {
  Vec2 origin = Vec2::Zero();
  Vec2 spacing = Vec2::Ones();
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double lower(int axis) const { return origin[axis]; }
  double upper(int axis) const { return origin[axis] + spacing[axis] * ((axis == 0 ? nx : ny) - 1); }
};

// A smooth-enough scalar coefficient c, W_i or h_ij as a function of (t, x).
//
// Three representations are supported: a constant, an affine function
// value + gradient . x + rate * t, and a bilinear table in x. Gradients are
// returned as (d/dt, d/dx1, d/dx2).
class ScalarField {
 public:
  enum class Kind { constant, affine, table };

  ScalarField() = default;
  static ScalarField constant(double value);
  static ScalarField affine(double value, Vec2 gradient, double rate = 0.0);
  static ScalarField table(FieldTable table);

  Kind kind() const { return kind_; }
  double value(const SpacetimePoint& p) const;
  Vec3 gradient(const SpacetimePoint& p) const;

  bool is_constant() const { return kind_ == Kind::constant; }
  bool is_time_dependent() const { return kind_ == Kind::affine && rate_ != 0.0; }
  bool contains(const Vec2& x) const;

  double constant_value() const { return value_; }
  const Vec2& affine_gradient() const { return gradient_; }
  double affine_rate() const { return rate_; }
  const std::optional<FieldTable>& table_data() const { return table_; }

 private:
  Kind kind_ = Kind::constant;
  double value_ = 0.0;
  Vec2 gradient_ = Vec2::Zero();
  double rate_ = 0.0;
  std::optional<FieldTable> table_;
};

}  // namespace conewave
