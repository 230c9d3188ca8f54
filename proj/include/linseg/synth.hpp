#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linseg/components.hpp"

namespace linseg {

enum class LineKind { straight, skewed, curved };

std::string to_string(LineKind kind);
LineKind parse_line_kind(const std::string& s);

// One dashed synthetic text line. Angles are in degrees in image
// coordinates (x right, y down), so positive angles descend to the right.
//
// The path is P(s) = start + s*u + A*sin(2*pi*s/period)*n for s in
// [0, length], with u the base direction and n its normal; A = 0 unless the
// line is curved. Straight lines ignore angle_deg and run horizontally.
struct LineSpec {
  LineKind kind = LineKind::straight;
  double angle_deg = 0.0;
  double amplitude = 0.0;  // curved only, px
  double period = 0.0;     // curved only, px
  Point2 start;
  double length = 100.0;
  double segment_length = 10.0;
  double gap = 4.0;
  int stroke_thickness = 3;
  // The ground-truth mask covers every pixel within
  // stroke_thickness / 2 + mask_margin of the path.
  double mask_margin = 2.0;
  // Each dash length is drawn uniformly from segment_length +/- jitter.
  double jitter = 0.0;

  void validate() const;
  Point2 point_at(double s) const;
  // Unit tangent of the path at s.
  Point2 tangent_at(double s) const;
};

struct Dash {
  int line = 0;  // 1-based line index
  Point2 center;
  Point2 direction;
  double length = 0.0;
};

struct SynthPage {
  BinaryRaster page;      // dashes as foreground
  LabelRaster gt_masks;   // line k covered by label k
  std::vector<Dash> dashes;
};

// Renders the lines in order; line k (1-based) gets label k. Throws
// ContractError when a line leaves the page and GenerationError when two
// line masks overlap.
SynthPage generate(const std::vector<LineSpec>& specs, int width, int height,
                   std::uint64_t seed);

struct RandomPageOptions {
  int margin = 20;
  int line_spacing = 30;  // minimum gap between the masks of adjacent lines
  double max_gap = 6.0;
};

// Seeded mix of straight, skewed (both directions) and curved lines stacked
// top to bottom without overlap.
std::vector<LineSpec> random_line_specs(std::uint64_t seed, int width, int height,
                                        const RandomPageOptions& options = {});

}  // namespace linseg
