#include "conewave/scenario.hpp"

#include "conewave/spline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace conewave {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw ConfigurationError(pointer, message);
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ptr, "must be finite");
  return v;
}

double positive(const json& j, const std::string& ptr) {
  const double v = number(j, ptr);
  if (!(v > 0.0)) fail(ptr, "must be positive");
  return v;
}

Vec2 pair(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) fail(ptr, "expected [x1, x2]");
  return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
}

void check_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required) {
  if (!obj.is_object()) fail(ptr.empty() ? "/" : ptr, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(ptr + "/" + key, "unknown key");
  }
  for (const char* r : required)
    if (!obj.contains(r)) fail(ptr + "/" + r, "required key is missing");
}

ScalarField parse_field(const json& j, const std::string& ptr) {
  if (j.is_number()) return ScalarField::constant(number(j, ptr));
  if (!j.is_object() || j.size() != 1) fail(ptr, "expected a number, {\"linear\": ...} or {\"table\": ...}");
  if (j.contains("linear")) {
    const std::string p = ptr + "/linear";
    const json& l = j["linear"];
    check_keys(l, p, {"value", "gradient", "rate"}, {"value"});
    const double value = number(l["value"], p + "/value");
    const Vec2 grad = l.contains("gradient") ? pair(l["gradient"], p + "/gradient") : Vec2::Zero();
    const double rate = l.contains("rate") ? number(l["rate"], p + "/rate") : 0.0;
    return ScalarField::affine(value, grad, rate);
  }
  if (j.contains("table")) {
    const std::string p = ptr + "/table";
    const json& t = j["table"];
    check_keys(t, p, {"origin", "spacing", "shape", "values"}, {"origin", "spacing", "shape", "values"});
    FieldTable table;
    table.origin = pair(t["origin"], p + "/origin");
    table.spacing = t["spacing"].is_number() ? Vec2::Constant(positive(t["spacing"], p + "/spacing"))
                                             : pair(t["spacing"], p + "/spacing");
    const json& shape = t["shape"];
    if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_integer() || !shape[1].is_number_integer())
      fail(p + "/shape", "expected [nx, ny]");
    table.nx = shape[0].get<int>();
    table.ny = shape[1].get<int>();
    const json& values = t["values"];
    if (!values.is_array()) fail(p + "/values", "expected an array");
    for (std::size_t r = 0; r < values.size(); ++r) {
      const std::string rp = p + "/values/" + std::to_string(r);
      if (values[r].is_array()) {
        for (std::size_t c = 0; c < values[r].size(); ++c)
          table.values.push_back(number(values[r][c], rp + "/" + std::to_string(c)));
      } else {
        table.values.push_back(number(values[r], rp));
      }
    }
    try {
      return ScalarField::table(std::move(table));
    } catch (const ConfigurationError& e) {
      fail(p, e.what());
    }
  }
  fail(ptr, "expected a number, {\"linear\": ...} or {\"table\": ...}");
}

MetricParams parse_metric(const json& j, Family& family) {
  check_keys(j, "/metric", {"family", "params"}, {"family"});
  if (!j["family"].is_string()) fail("/metric/family", "expected a string");
  const auto f = family_from_string(j["family"].get<std::string>());
  if (!f) fail("/metric/family", "unknown family '" + j["family"].get<std::string>() + "'");
  family = *f;
  const json params = j.contains("params") ? j["params"] : json::object();
  const std::string p = "/metric/params";
  switch (*f) {
    case Family::minkowski: {
      check_keys(params, p, {"c"}, {});
      MinkowskiParams mk;
      if (params.contains("c")) mk.c = number(params["c"], p + "/c");
      return mk;
    }
    case Family::zermelo: {
      check_keys(params, p, {"c", "W", "h"}, {});
      ZermeloParams z;
      if (params.contains("c")) z.c = parse_field(params["c"], p + "/c");
      if (params.contains("W")) {
        const json& w = params["W"];
        if (!w.is_array() || w.size() != 2) fail(p + "/W", "expected [W1, W2]");
        z.wind = {parse_field(w[0], p + "/W/0"), parse_field(w[1], p + "/W/1")};
      }
      if (params.contains("h")) {
        const json& h = params["h"];
        if (!h.is_array() || h.size() != 2 || !h[0].is_array() || h[0].size() != 2 || !h[1].is_array() ||
            h[1].size() != 2)
          fail(p + "/h", "expected [[h11, h12], [h12, h22]]");
        if (h[0][1] != h[1][0]) fail(p + "/h/1/0", "h must be symmetric");
        z.h = {parse_field(h[0][0], p + "/h/0/0"), parse_field(h[0][1], p + "/h/0/1"),
               parse_field(h[1][1], p + "/h/1/1")};
      }
      return z;
    }
    case Family::quartic: {
      check_keys(params, p, {"c", "lambda"}, {});
      QuarticParams q;
      if (params.contains("c")) q.c = parse_field(params["c"], p + "/c");
      if (params.contains("lambda")) q.lambda = number(params["lambda"], p + "/lambda");
      return q;
    }
  }
  fail("/metric/family", "unsupported family");
}

Polygon parse_polygon(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() < 3) fail(ptr, "a polygon needs at least 3 vertices");
  Polygon poly;
  for (std::size_t i = 0; i < j.size(); ++i) poly.push_back(pair(j[i], ptr + "/" + std::to_string(i)));
  if (!is_simple_closed(poly)) fail(ptr, "polygon is not simple");
  if (signed_area(poly) == 0.0) fail(ptr, "polygon has zero area");
  if (poly.size() < kMinBoundaryVertices) {
    try {
      const PeriodicSpline spline(poly);
      Polygon resampled;
      for (std::size_t k = 0; k < kResampledVertices; ++k)
        resampled.push_back(spline.position(spline.period() * static_cast<double>(k) / kResampledVertices));
      poly = std::move(resampled);
    } catch (const DataError& e) {
      fail(ptr, e.what());
    }
    if (!is_simple_closed(poly)) fail(ptr, "polygon is not simple after spline resampling");
  }
  return poly;
}

std::vector<Polygon> parse_initial_set(const json& j) {
  const std::string ptr = "/initial_set";
  if (!j.is_array() || j.empty()) fail(ptr, "expected a polygon or a list of polygons");
  const bool nested = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  std::vector<Polygon> out;
  if (!nested) {
    out.push_back(parse_polygon(j, ptr));
  } else {
    for (std::size_t c = 0; c < j.size(); ++c) out.push_back(parse_polygon(j[c], ptr + "/" + std::to_string(c)));
  }
  if (out.size() > 1) {
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = a + 1; b < out.size(); ++b)
        if (!find_crossings({out[a], out[b]}).empty() || winding_number(out[a][0], out[b]) != 0 ||
            winding_number(out[b][0], out[a]) != 0)
          fail(ptr + "/" + std::to_string(b), "components must be disjoint");
  }
  return out;
}

std::string metric_pointer(const std::string& field) {
  if (field == "c" || field == "h" || field == "lambda" || field == "W") return "/metric/params/" + field;
  return "/metric/params";
}

}  // namespace

std::string_view to_string(OutputKind k) {
  switch (k) {
    case OutputKind::fronts_csv: return "fronts_csv";
    case OutputKind::traces_csv: return "traces_csv";
    case OutputKind::seeds_csv: return "seeds_csv";
    case OutputKind::svg: return "svg";
    case OutputKind::report_json: return "report_json";
  }
  return "unknown";
}

std::optional<OutputKind> output_from_string(std::string_view name) {
  for (auto k : {OutputKind::fronts_csv, OutputKind::traces_csv, OutputKind::seeds_csv, OutputKind::svg,
                 OutputKind::report_json})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    fail("", std::string("JSON parse error: ") + e.what());
  }
  check_keys(root, "",
             {"name", "metric", "initial_set", "t_grid", "dt_step", "oracle", "refinement", "outputs"},
             {"name", "metric", "initial_set", "t_grid"});
  Scenario s;
  if (!root["name"].is_string() || root["name"].get<std::string>().empty()) fail("/name", "expected a non-empty string");
  s.name = root["name"].get<std::string>();

  const json& grid = root["t_grid"];
  if (!grid.is_array() || grid.empty()) fail("/t_grid", "expected a non-empty array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = number(grid[i], "/t_grid/" + std::to_string(i));
    if (!(t > 0.0)) fail("/t_grid", "entries must be positive");
    if (!s.t_grid.empty() && !(t > s.t_grid.back())) fail("/t_grid", "must be strictly increasing");
    s.t_grid.push_back(t);
  }
  if (root.contains("dt_step")) s.dt_step = positive(root["dt_step"], "/dt_step");

  s.initial_set = parse_initial_set(root["initial_set"]);

  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    check_keys(o, "/oracle", {"dx", "dt_layer", "extents", "neighborhood_radius"}, {"dx", "dt_layer", "extents"});
    OracleSpec spec;
    spec.dx = positive(o["dx"], "/oracle/dx");
    spec.dt_layer = positive(o["dt_layer"], "/oracle/dt_layer");
    const json& e = o["extents"];
    if (!e.is_array() || e.size() != 2) fail("/oracle/extents", "expected [[x1min, x1max], [x2min, x2max]]");
    const Vec2 r1 = pair(e[0], "/oracle/extents/0"), r2 = pair(e[1], "/oracle/extents/1");
    if (!(r1[1] > r1[0])) fail("/oracle/extents/0", "max must exceed min");
    if (!(r2[1] > r2[0])) fail("/oracle/extents/1", "max must exceed min");
    spec.lower = {r1[0], r2[0]};
    spec.upper = {r1[1], r2[1]};
    if (o.contains("neighborhood_radius")) {
      if (!o["neighborhood_radius"].is_number_integer() || o["neighborhood_radius"].get<int>() < 1)
        fail("/oracle/neighborhood_radius", "expected a positive integer");
      spec.neighborhood_radius = o["neighborhood_radius"].get<int>();
    }
    s.oracle = spec;
  }
  if (root.contains("refinement")) {
    check_keys(root["refinement"], "/refinement", {"max_gap"}, {"max_gap"});
    s.max_gap = positive(root["refinement"]["max_gap"], "/refinement/max_gap");
  }
  if (root.contains("outputs")) {
    const json& outs = root["outputs"];
    if (!outs.is_array()) fail("/outputs", "expected an array");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      const std::string p = "/outputs/" + std::to_string(i);
      if (!outs[i].is_string()) fail(p, "expected a string");
      const auto k = output_from_string(outs[i].get<std::string>());
      if (!k) fail(p, "unknown output '" + outs[i].get<std::string>() + "'");
      if (std::find(s.outputs.begin(), s.outputs.end(), *k) == s.outputs.end()) s.outputs.push_back(*k);
    }
  } else {
    s.outputs = {OutputKind::fronts_csv, OutputKind::report_json};
  }

  s.metric = parse_metric(root["metric"], s.family);

  Vec2 lo = s.initial_set[0][0], hi = lo;
  for (const auto& poly : s.initial_set)
    for (const auto& v : poly) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  if (s.oracle) {
    lo = lo.cwiseMin(s.oracle->lower);
    hi = hi.cwiseMax(s.oracle->upper);
  }
  const double grow = 2.0 * s.t_grid.back();
  s.region.lower = lo - Vec2::Constant(grow);
  s.region.upper = hi + Vec2::Constant(grow);
  s.region.t_min = 0.0;
  s.region.t_max = s.t_grid.back();
  try {
    (void)build_metric(s.metric, s.region);
  } catch (const ConfigurationError& e) {
    fail(metric_pointer(e.field()), e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string describe_families() {
  return "minkowski  L = c^2 v0^2 - |vx|^2\n"
         "  params: c (number > 0, default 1)\n"
         "zermelo    L = c^2 v0^2 - h(vx - v0 W, vx - v0 W)\n"
         "  params: c (field > 0, default 1), W ([field, field], default [0, 0]),\n"
         "          h ([[field, field], [field, field]] symmetric positive definite, default identity)\n"
         "quartic    L = c^2 v0^2 - sqrt(vx1^4 + vx2^4 + 2 lambda vx1^2 vx2^2)\n"
         "  params: c (field > 0, default 1), lambda (number in the open interval (1/3, 3), default 1)\n"
         "fields: a number, {\"linear\": {\"value\", \"gradient\": [g1, g2], \"rate\"}} or\n"
         "        {\"table\": {\"origin\": [x1, x2], \"spacing\": d or [d1, d2], \"shape\": [nx, ny], \"values\"}}\n";
}

}  // namespace conewave
