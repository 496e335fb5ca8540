#include "conewave/diagnostics.hpp"

#include <cmath>

namespace conewave {

DegeneracyReport check_degenerate_direction(const MetricModel& m, const WavefrontResult& result, int per_component) {
  DegeneracyReport rep;
  for (const auto& curve : result.curves) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < result.seeds.size(); ++i)
      if (result.seeds[i].component == curve.component) members.push_back(i);
    if (members.empty()) continue;
    const std::size_t n = std::min<std::size_t>(per_component, members.size());
    const double delta = 1e-5 * curve.spline.period();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = members[k * members.size() / n];
      const SeedPoint& seed = result.seeds[i];
      const std::vector<double> params{seed.parameter - delta, seed.parameter + delta};
      const auto side = lift_spline_points(m, curve.spline, params, curve.orientation_sign, seed.p.t, curve.component, 0);
      const GeodesicTrace lo = integrate_geodesic(m, side[0].p, side[0].N, result.t_grid.back(), result.dt_step);
      const GeodesicTrace hi = integrate_geodesic(m, side[1].p, side[1].N, result.t_grid.back(), result.dt_step);
      const GeodesicTrace& mid = result.traces[i];
      for (const auto& slice : result.slices) {
        if (slice.cut_count() > 0 || !slice.points[i].active) continue;
        const double tau = slice.tau;
        if (lo.samples.back().tau < tau || hi.samples.back().tau < tau || mid.samples.back().tau < tau) continue;
        const TraceSample s = interpolate(mid, tau);
        const Vec2 chord = interpolate(hi, tau).point.x - interpolate(lo, tau).point.x;
        if (!(chord.norm() > 0.0)) continue;
        const TangentVector N = project_lightlike(m, s.point, s.velocity);
        const Vec3 T(0.0, chord[0] / chord.norm(), chord[1] / chord.norm());
        const Mat3 g = fundamental_tensor(m, s.point, N);
        const Vec3 n = N.components();
        const double a = n.dot(g * n), b = n.dot(g * T), d = T.dot(g * T);
        // Eigenvalues of the symmetric 2x2 block [[a, b], [b, d]].
        const double mean = 0.5 * (a + d);
        const double rad = std::hypot(0.5 * (a - d), b);
        const double e1 = mean + rad, e2 = mean - rad;
        const double small = std::abs(e1) <= std::abs(e2) ? e1 : e2;
        const double other = std::abs(e1) <= std::abs(e2) ? e2 : e1;
        ++rep.samples;
        rep.worst_null_eigenvalue = std::max(rep.worst_null_eigenvalue, std::abs(small));
        rep.max_negative_eigenvalue = std::max(rep.max_negative_eigenvalue, other);
        rep.worst_cross_term = std::max(rep.worst_cross_term, std::abs(b));
        if (!(std::abs(small) <= kNullEigenvalueTol && other <= kNegativeEigenvalueBound)) rep.pass = false;
      }
    }
  }
  if (rep.samples == 0) rep.pass = false;
  return rep;
}

}  // namespace conewave
