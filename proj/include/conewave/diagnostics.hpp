#pragma once

#include "conewave/wavefront.hpp"

#include <cstddef>
#include <limits>

namespace conewave {

struct DegeneracyReport {
  std::size_t samples = 0;
  // Eigenvalues of g_N restricted to span{N, slice tangent}: the one closest
  // to zero and the other one.
  double worst_null_eigenvalue = 0.0;
  double max_negative_eigenvalue = -std::numeric_limits<double>::infinity();
  // max |g_N(N, tangent)| over samples, tangent normalized.
  double worst_cross_term = 0.0;
  bool pass = true;
};

inline constexpr double kNullEigenvalueTol = 1e-8;
inline constexpr double kNegativeEigenvalueBound = -1e-6;

// Samples up to `per_component` seeds of every component and checks, on every
// slice without cut points, that g_N is degenerate along N and negative along
// the slice tangent. The tangent comes from two neighbouring geodesics seeded
// a tiny parameter step away on the seed spline.
DegeneracyReport check_degenerate_direction(const MetricModel& m, const WavefrontResult& result,
                                            int per_component = 8);

}  // namespace conewave
