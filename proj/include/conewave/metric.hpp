#pragma once

#include "conewave/fields.hpp"
#include "conewave/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace conewave {

enum class Family { minkowski, zermelo, quartic };

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);

// L = c^2 v0^2 - |vx|^2 with constant c.
struct MinkowskiParams {
  double c = 1.0;
};

// Zermelo navigation: own speed c relative to the spatial metric h, carried
// by the wind W. L = c^2 v0^2 - h(vx - v0 W, vx - v0 W).
struct ZermeloParams {
  ScalarField c = ScalarField::constant(1.0);
  std::array<ScalarField, 2> wind{ScalarField::constant(0.0), ScalarField::constant(0.0)};
  // Entries (h11, h12, h22) of the symmetric spatial metric.
  std::array<ScalarField, 3> h{ScalarField::constant(1.0), ScalarField::constant(0.0),
                               ScalarField::constant(1.0)};
};

// Non-quadratic metric with the quartic spatial norm
// L = c^2 v0^2 - sqrt(sum vx_i^4 + 2 lambda sum_{i<j} vx_i^2 vx_j^2).
struct QuarticParams {
  ScalarField c = ScalarField::constant(1.0);
  double lambda = 1.0;
};

using MetricParams = std::variant<MinkowskiParams, ZermeloParams, QuarticParams>;

// Lambda window accepted by build_metric for the quartic family.
inline constexpr double kQuarticLambdaMin = 1.0 / 3.0;
inline constexpr double kQuarticLambdaMax = 3.0;

// Axis-aligned region (plus a time range) where field parameters are
// validated at construction.
struct ValidationRegion {
  Vec2 lower{-1.0, -1.0};
  Vec2 upper{1.0, 1.0};
  double t_min = 0.0;
  double t_max = 1.0;
  int samples_per_axis = 9;
};

// Derivatives of L with respect to the base point (t, x1, x2).
struct PositionDerivatives {
  Vec3 dL_dx = Vec3::Zero();
  // d2L_dv_dx(j, k) = d^2 L / dv^j dx^k.
  Mat3 d2L_dv_dx = Mat3::Zero();
};

// Immutable Lorentz-Finsler metric on R x R^2. Safe to share across threads.
class MetricModel {
 public:
  Family family() const;
  int dimension() const { return kSpatialDim; }
  const MetricParams& params() const { return params_; }

  double L(const SpacetimePoint& p, const TangentVector& v) const;
  Vec3 gradient_v(const SpacetimePoint& p, const TangentVector& v) const;
  // Half the v-Hessian of L. No degeneracy check; see fundamental_tensor().
  Mat3 hessian_half(const SpacetimePoint& p, const TangentVector& v) const;
  PositionDerivatives position_derivatives(const SpacetimePoint& p, const TangentVector& v) const;

  // A point strictly inside the dt = 1 cone fiber, used as the origin for
  // radial parametrizations of the fiber (the wind for Zermelo, 0 otherwise).
  Vec2 fiber_center(const SpacetimePoint& p) const;
  // Largest Euclidean spatial speed of a lightlike vector with v0 = 1.
  double max_speed(const SpacetimePoint& p) const;
  // Euclidean length s of the lightlike (1, fiber_center + s u), u unit.
  double fiber_radius(const SpacetimePoint& p, const Vec2& u) const;
  // Smallest tau > 0 with (tau, displacement) future causal at p; +inf when
  // no future causal vector has this spatial part.
  double earliest_traversal_time(const SpacetimePoint& p, const Vec2& displacement) const;

  bool in_domain(const SpacetimePoint& p) const;
  bool is_time_dependent() const;
  // True when L does not depend on the base point at all.
  bool is_homogeneous() const;

 private:
  friend MetricModel build_metric(MetricParams, const std::optional<ValidationRegion>&);
  friend MetricModel build_metric_unchecked(MetricParams);
  explicit MetricModel(MetricParams params) : params_(std::move(params)) {}

  MetricParams params_;
};

// Validates parameters and constructs the model. Throws ConfigurationError
// naming the offending parameter ("c", "h", "lambda", ...).
MetricModel build_metric(MetricParams params, const std::optional<ValidationRegion>& region = std::nullopt);

// Skips the lambda window; used to probe cone conditions outside it.
MetricModel build_metric_unchecked(MetricParams params);

double eval_L(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v);

// Step used by the finite-difference tensor: 1e-4 * max(1, |v|).
double fd_step(const TangentVector& v);

// g_v(e_a, e_b). Throws NumericError if the row-scaled determinant falls
// below 1e-12.
Mat3 fundamental_tensor(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v);
// Central second differences of L; independent of the analytic formulas.
Mat3 fundamental_tensor_fd(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v);
// |det| of G after scaling each row by its largest entry.
double scaled_determinant(const Mat3& g);

enum class CausalTag { timelike, lightlike, causal_boundary_ambiguous, spacelike, past_causal };
std::string_view to_string(CausalTag tag);

struct Classification {
  CausalTag tag = CausalTag::spacelike;
  double L_value = 0.0;
  double dt_value = 0.0;
};

inline constexpr double kDefaultClassifyTol = 1e-9;

Classification classify(const MetricModel& m, const SpacetimePoint& p, const TangentVector& v,
                        double tol = kDefaultClassifyTol);
// The pure tag rule shared by classify().
CausalTag classify_values(double L_value, double dt_value, double tol);

// Future lightlike vector (1, y) whose medium-relative direction
// y - fiber_center(p) is the unit vector u.
TangentVector lightlike_ray(const MetricModel& m, const SpacetimePoint& p, const Vec2& u);

struct ConeReport {
  bool pass = false;
  bool salient = true;
  bool convex = true;
  bool strongly_convex = true;
  bool lorentzian = true;
  // min over samples of cross(y_k - y_{k-1}, y_{k+1} - y_k), normalized by r^2.
  double worst_turn = 0.0;
  // min normalized discrete curvature (1 for a circle).
  double strong_convexity_margin = 0.0;
  double worst_angle = 0.0;
  int samples = 0;
  std::vector<std::string> failures;
};

inline constexpr double kStrongConvexityThreshold = 1e-6;

// Samples the dt = 1 fiber at `samples` angles and checks saliency,
// convexity and strong convexity of the resulting closed curve.
ConeReport verify_cone_conditions(const MetricModel& m, const SpacetimePoint& p, int samples = 64);

}  // namespace conewave
