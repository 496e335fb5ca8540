#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace conewave {

// Spatial slices are two-dimensional throughout; spacetime is R x R^2.
inline constexpr int kSpatialDim = 2;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

struct SpacetimePoint {
  double t = 0.0;
  Vec2 x = Vec2::Zero();

  SpacetimePoint() = default;
  SpacetimePoint(double t_, Vec2 x_) : t(t_), x(std::move(x_)) {}

  // Coordinates in the order (t, x1, x2).
  Vec3 coords() const { return {t, x[0], x[1]}; }
  static SpacetimePoint from_coords(const Vec3& c) { return {c[0], Vec2(c[1], c[2])}; }
};

// Components of a tangent vector: v0 = dt(v), vx = spatial part.
struct TangentVector {
  double v0 = 0.0;
  Vec2 vx = Vec2::Zero();

  TangentVector() = default;
  TangentVector(double v0_, Vec2 vx_) : v0(v0_), vx(std::move(vx_)) {}
  TangentVector(double a, double b, double c) : v0(a), vx(b, c) {}

  Vec3 components() const { return {v0, vx[0], vx[1]}; }
  static TangentVector from_components(const Vec3& c) { return {c[0], Vec2(c[1], c[2])}; }

  TangentVector scaled(double s) const { return {s * v0, s * vx}; }
  bool is_zero() const { return v0 == 0.0 && vx.isZero(0.0); }
};

// Error hierarchy. Each category maps onto one failure class of the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid metric or scenario parameters.
class ConfigurationError : public Error {
 public:
  ConfigurationError(const std::string& field, const std::string& message)
      : Error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Root finding, degenerate tensors, singular solves.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Lift root counts, degenerate outward selection.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Malformed inputs: self-intersecting polylines, non-monotone traces.
class DataError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace conewave
