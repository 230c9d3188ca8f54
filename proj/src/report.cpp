#include "linseg/report.hpp"

#include <cmath>

namespace linseg {
namespace {

nlohmann::json scores_json(const Scores& s) {
  return {{"recall", s.recall}, {"precision", s.precision}, {"f_measure", s.f_measure}};
}

nlohmann::json fraction_json(const Fraction& f) {
  return {{"value", f.value()}, {"numerator", f.num}, {"denominator", f.den}};
}

std::string method_name(FitMethod m) {
  switch (m) {
    case FitMethod::direct: return "direct";
    case FitMethod::moments: return "moments";
    case FitMethod::single_pixel: return "single_pixel";
  }
  return "direct";
}

nlohmann::json header(const ToolConfig& cfg) {
  return {{"tool", "linseg"},
          {"tool_version", kToolVersion},
          {"schema_version", kReportSchemaVersion},
          {"config", to_json(cfg)}};
}

}  // namespace

nlohmann::json report_json(const EvalReport& report, const ToolConfig& cfg) {
  nlohmann::json j = header(cfg);
  nlohmann::json lines = nlohmann::json::array();
  for (const LineScore& s : report.per_line) {
    nlohmann::json inter = nlohmann::json::array();
    for (const Intersection& i : s.intersecting_lines) {
      inter.push_back({{"extracted_id", i.extracted_id}, {"overlap", i.overlap}, {"size", i.size}});
    }
    lines.push_back({{"line_id", s.line_id},
                     {"gt_size", s.gt_size},
                     {"recall", fraction_json(s.recall)},
                     {"precision", fraction_json(s.precision)},
                     {"f_measure", s.f_measure},
                     {"excluded", s.excluded},
                     {"intersecting_lines", inter}});
  }
  j["per_line"] = lines;
  j["aggregates"] = {{"macro", scores_json(report.macro)}, {"micro", scores_json(report.micro)}};
  j["averaging"] = to_string(report.averaging);
  j["aggregate"] = scores_json(report.aggregate());
  j["singleton_policy"] = to_string(report.config.singleton_policy);
  j["assignment_policy"] = {
      {"rule", "majority_pixel_overlap"},
      {"tie_break", "smaller_label"},
      {"component_connectivity", static_cast<int>(report.config.connectivity)},
      {"count_unassigned_in_ei", report.config.count_unassigned_in_ei}};
  j["unassigned_components"] = report.unassigned_components;
  return j;
}

nlohmann::json ellipses_json(const PostprocessResult& result, const ToolConfig& cfg) {
  nlohmann::json j = header(cfg);
  std::map<int, std::vector<int>> memberships;
  for (const OrientationSubset& s : result.subsets) {
    for (int id : s.members) memberships[id].push_back(s.j);
  }
  nlohmann::json comps = nlohmann::json::array();
  for (const FittedComponent& fc : result.components) {
    const EllipseFit& f = fc.fit;
    comps.push_back({{"id", fc.component.id},
                     {"area", fc.component.area()},
                     {"center", {f.center.x, f.center.y}},
                     {"r_major", f.r_major},
                     {"r_minor", f.r_minor},
                     {"theta", {f.theta.x, f.theta.y}},
                     {"alpha", f.alpha},
                     {"fit_method", method_name(f.method)},
                     {"subsets", memberships[fc.component.id]}});
  }
  nlohmann::json subsets = nlohmann::json::array();
  for (const OrientationSubset& s : result.subsets) {
    subsets.push_back({{"j", s.j},
                       {"v", {s.v.x, s.v.y}},
                       {"kernel_direction", {s.kernel_direction.x, s.kernel_direction.y}},
                       {"members", s.members}});
  }
  j["components"] = comps;
  j["subsets"] = subsets;
  return j;
}

nlohmann::json manifest_json(const PatchSet& set, const ToolConfig& cfg) {
  nlohmann::json j = header(cfg);
  j["source"] = set.source;
  j["window"] = set.window;
  j["padded_size"] = {set.page_width, set.page_height};
  j["seed"] = set.seed;
  nlohmann::json patches = nlohmann::json::array();
  for (const PatchEntry& e : set.entries) {
    patches.push_back({{"index", e.index}, {"x", e.x}, {"y", e.y}, {"seed", e.seed}});
  }
  j["patches"] = patches;
  return j;
}

Rgb line_color(std::uint32_t id) {
  // Hue walks by the golden angle; saturation and value are fixed.
  const double hue = std::fmod(id * 137.50776405003785, 360.0) / 60.0;
  const double c = 0.85;
  const double x = c * (1.0 - std::abs(std::fmod(hue, 2.0) - 1.0));
  const double m = 0.95 - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto to8 = [&](double v) { return static_cast<std::uint8_t>(std::lround(255.0 * (v + m))); };
  return {to8(r), to8(g), to8(b)};
}

RgbRaster overlay(const GrayRaster& page, const LabelRaster& labels) {
  if (!page.same_shape(labels)) throw ContractError("overlay: page and labels differ in size");
  RgbRaster out(page.width(), page.height());
  auto gray = page.pixels();
  auto lab = labels.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const std::uint8_t g = gray[i];
    if (lab[i] == 0) {
      dst[i] = {g, g, g};
      continue;
    }
    const Rgb c = line_color(lab[i]);
    auto mix = [&](std::uint8_t v) { return static_cast<std::uint8_t>((v + g + 1) / 2); };
    dst[i] = {mix(c.r), mix(c.g), mix(c.b)};
  }
  return out;
}

}  // namespace linseg
