#pragma once

#include "json.hpp"

#include "linseg/config.hpp"
#include "linseg/metric.hpp"
#include "linseg/pipeline.hpp"
#include "linseg/postprocess.hpp"

namespace linseg {

// report.json: per-line scores, aggregates for both averaging modes, the
// selected aggregate, metric policies and the effective tool config.
nlohmann::json report_json(const EvalReport& report, const ToolConfig& cfg);

// ellipses.json: fitted ellipse and subset memberships per component.
nlohmann::json ellipses_json(const PostprocessResult& result, const ToolConfig& cfg);

// manifest.json for a patch set.
nlohmann::json manifest_json(const PatchSet& set, const ToolConfig& cfg);

// Deterministic colour of a line id (golden-angle hue walk).
Rgb line_color(std::uint32_t id);

// Colours every labeled pixel by its line id, blended 50/50 with the page;
// unlabeled pixels keep the page's gray value.
RgbRaster overlay(const GrayRaster& page, const LabelRaster& labels);

}  // namespace linseg
