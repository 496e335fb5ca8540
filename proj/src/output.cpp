#include "conewave/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace conewave {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt("%.17g", v);
}

std::string fronts_csv(const WavefrontResult& result) {
  std::string out = "tau,seed_index,x1,x2,active\n";
  for (const auto& s : result.slices)
    for (const auto& p : s.points)
      out += format_double(s.tau) + ',' + std::to_string(p.seed_index) + ',' + format_double(p.x[0]) + ',' +
             format_double(p.x[1]) + ',' + (p.active ? "1" : "0") + '\n';
  return out;
}

std::string traces_csv(const WavefrontResult& result) {
  std::string out = "seed_index,tau,t,x1,x2,v0,vx1,vx2\n";
  for (const auto& t : result.traces)
    for (const auto& s : t.samples)
      out += std::to_string(t.seed_index) + ',' + format_double(s.tau) + ',' + format_double(s.point.t) + ',' +
             format_double(s.point.x[0]) + ',' + format_double(s.point.x[1]) + ',' + format_double(s.velocity.v0) +
             ',' + format_double(s.velocity.vx[0]) + ',' + format_double(s.velocity.vx[1]) + '\n';
  return out;
}

std::string seeds_csv(const MetricModel& m, const WavefrontResult& result) {
  std::string out = "index,x1,x2,conormal1,conormal2,N0,N1,N2,residual\n";
  for (const auto& s : result.seeds)
    out += std::to_string(s.index) + ',' + format_double(s.p.x[0]) + ',' + format_double(s.p.x[1]) + ',' +
           format_double(s.outward_conormal[0]) + ',' + format_double(s.outward_conormal[1]) + ',' +
           format_double(s.N.v0) + ',' + format_double(s.N.vx[0]) + ',' + format_double(s.N.vx[1]) + ',' +
           format_double(orthogonality_residual(m, s)) + '\n';
  return out;
}

std::string arrival_csv(const ArrivalField& field) {
  std::string out = "x1,x2,time\n";
  for (int j = 0; j < field.grid.ny; ++j)
    for (int i = 0; i < field.grid.nx; ++i) {
      const Vec2 x = field.grid.node(i, j);
      out += format_double(x[0]) + ',' + format_double(x[1]) + ',' + format_double(field.time(i, j)) + '\n';
    }
  return out;
}

SvgView data_view(const WavefrontResult& result) {
  SvgView v;
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  const auto grow = [&](const Vec2& x) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  };
  for (const auto& s : result.seeds) grow(s.p.x);
  for (const auto& sl : result.slices)
    for (const auto& p : sl.points) grow(p.x);
  if (!std::isfinite(lo[0])) return v;
  const Vec2 pad = 0.05 * (hi - lo).cwiseMax(Vec2::Constant(1e-9));
  v.lower = lo - pad;
  v.upper = hi + pad;
  return v;
}

std::string front_svg(const WavefrontResult& result, const SvgView& view) {
  constexpr double kSize = 800.0;
  const Vec2 span = view.upper - view.lower;
  const double scale = kSize / std::max(span[0], span[1]);
  const auto px = [&](const Vec2& x) {
    return fmt("%.3f", (x[0] - view.lower[0]) * scale) + ',' + fmt("%.3f", (view.upper[1] - x[1]) * scale);
  };
  const std::string w = fmt("%.0f", span[0] * scale), h = fmt("%.0f", span[1] * scale);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h +
                    "\" viewBox=\"0 0 " + w + ' ' + h + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (view.draw_traces) {
    out += "<g fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.5\">\n";
    for (const auto& t : result.traces) {
      out += "<polyline points=\"";
      for (const auto& s : t.samples) out += px(s.point.x) + ' ';
      out += "\"/>\n";
    }
    out += "</g>\n";
  }

  out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
  for (const auto& loop : active_loops(seed_slice(result.seeds))) {
    out += "<polygon points=\"";
    for (const auto& x : loop) out += px(x) + ' ';
    out += "\"/>\n";
  }
  out += "</g>\n";

  const std::size_t n = result.slices.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + view.max_slices - 1) / std::max(1, view.max_slices));
  out += "<g fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\">\n";
  for (std::size_t k = stride - 1; k < n; k += stride) {
    for (const auto& loop : active_loops(result.slices[k])) {
      out += "<polygon points=\"";
      for (const auto& x : loop) out += px(x) + ' ';
      out += "\"/>\n";
    }
  }
  out += "</g>\n<g stroke=\"#d62728\" stroke-width=\"1\">\n";
  for (std::size_t k = stride - 1; k < n; k += stride)
    for (const auto& p : result.slices[k].points) {
      if (!p.cut) continue;
      const double cx = (p.x[0] - view.lower[0]) * scale, cy = (view.upper[1] - p.x[1]) * scale;
      out += "<path d=\"M" + fmt("%.3f", cx - 2) + ' ' + fmt("%.3f", cy - 2) + " L" + fmt("%.3f", cx + 2) + ' ' +
             fmt("%.3f", cy + 2) + " M" + fmt("%.3f", cx - 2) + ' ' + fmt("%.3f", cy + 2) + " L" +
             fmt("%.3f", cx + 2) + ' ' + fmt("%.3f", cy - 2) + "\"/>\n";
    }
  out += "</g>\n</svg>\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
  if (!f) throw DataError("write failed for " + path.string());
}

}  // namespace conewave
