#pragma once

#include "conewave/oracle.hpp"
#include "conewave/wavefront.hpp"

#include <filesystem>
#include <string>

namespace conewave {

// "%.17g"; non-finite values print as inf, -inf or nan.
std::string format_double(double v);

std::string fronts_csv(const WavefrontResult& result);
std::string traces_csv(const WavefrontResult& result);
std::string seeds_csv(const MetricModel& m, const WavefrontResult& result);
std::string arrival_csv(const ArrivalField& field);

struct SvgView {
  Vec2 lower{-2.0, -2.0};
  Vec2 upper{2.0, 2.0};
  int max_slices = 12;
  bool draw_traces = false;
};

// Seed curve, a subset of slices (active arcs as polylines, trimmed points as
// crosses) and optionally the traces.
std::string front_svg(const WavefrontResult& result, const SvgView& view);

// Bounding box of every seed and slice point, padded by 5%.
SvgView data_view(const WavefrontResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace conewave
