#include "conewave/spline.hpp"

#include <algorithm>
#include <cmath>

namespace conewave {

namespace {

// Solves the cyclic tridiagonal system
//   sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]   (indices mod n)
// by Sherman-Morrison on top of the Thomas algorithm.
std::vector<Vec2> solve_cyclic(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                               std::vector<Vec2> rhs) {
  const std::size_t n = diag.size();
  const double alpha = sup[n - 1];  // couples row n-1 to x[0]
  const double beta = sub[0];       // couples row 0 to x[n-1]
  const double gamma = -diag[0];
  diag[0] -= gamma;
  diag[n - 1] -= alpha * beta / gamma;

  const auto thomas = [&](std::vector<Vec2> r) {
    std::vector<double> c(n);
    c[0] = sup[0] / diag[0];
    r[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = diag[i] - sub[i] * c[i - 1];
      c[i] = sup[i] / m;
      r[i] = (r[i] - sub[i] * r[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) r[i] -= c[i] * r[i + 1];
    return r;
  };

  std::vector<Vec2> x = thomas(std::move(rhs));
  std::vector<Vec2> u(n, Vec2::Zero());
  u[0] = Vec2::Constant(gamma);
  u[n - 1] = Vec2::Constant(alpha);
  const std::vector<Vec2> z = thomas(u);
  for (int axis = 0; axis < 2; ++axis) {
    const double factor = (x[0][axis] + beta * x[n - 1][axis] / gamma) /
                          (1.0 + z[0][axis] + beta * z[n - 1][axis] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i][axis] -= factor * z[i][axis];
  }
  return x;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<Vec2> vertices) : points_(std::move(vertices)) {
  const std::size_t n = points_.size();
  if (n < 3) throw DataError("PeriodicSpline: need at least 3 vertices");
  knots_.assign(n + 1, 0.0);
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = (points_[(i + 1) % n] - points_[i]).norm();
    if (!(h[i] > 0.0)) throw DataError("PeriodicSpline: repeated vertex");
    knots_[i + 1] = knots_[i] + h[i];
  }
  std::vector<double> sub(n), diag(n), sup(n);
  std::vector<Vec2> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    sub[i] = h[prev];
    diag[i] = 2.0 * (h[prev] + h[i]);
    sup[i] = h[i];
    rhs[i] = 6.0 * ((points_[(i + 1) % n] - points_[i]) / h[i] - (points_[i] - points_[prev]) / h[prev]);
  }
  second_ = solve_cyclic(std::move(sub), std::move(diag), std::move(sup), std::move(rhs));
}

std::size_t PeriodicSpline::segment(double& u) const {
  const double period = knots_.back();
  u = std::fmod(u, period);
  if (u < 0.0) u += period;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
  return std::min(i, points_.size() - 1);
}

Vec2 PeriodicSpline::position(double u) const {
  const std::size_t i = segment(u);
  const std::size_t j = (i + 1) % points_.size();
  const double h = knots_[i + 1] - knots_[i];
  const double a = knots_[i + 1] - u, b = u - knots_[i];
  return second_[i] * (a * a * a / (6 * h)) + second_[j] * (b * b * b / (6 * h)) +
         (points_[i] / h - second_[i] * h / 6) * a + (points_[j] / h - second_[j] * h / 6) * b;
}

Vec2 PeriodicSpline::derivative(double u) const {
  const std::size_t i = segment(u);
  const std::size_t j = (i + 1) % points_.size();
  const double h = knots_[i + 1] - knots_[i];
  const double a = knots_[i + 1] - u, b = u - knots_[i];
  return -second_[i] * (a * a / (2 * h)) + second_[j] * (b * b / (2 * h)) - (points_[i] / h - second_[i] * h / 6) +
         (points_[j] / h - second_[j] * h / 6);
}

}  // namespace conewave
