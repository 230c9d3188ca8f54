#include "linseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace linseg {
namespace {

constexpr double kSampleStep = 0.25;

Point2 base_direction(const LineSpec& s) {
  if (s.kind == LineKind::straight) return {1.0, 0.0};
  const double a = s.angle_deg * M_PI / 180.0;
  return {std::cos(a), std::sin(a)};
}

double half_width(const LineSpec& s) { return 0.5 * s.stroke_thickness + s.mask_margin; }

// Pixels with centers inside the rectangle: -L/2 <= (p-c).u < L/2 and
// -T/2 <= (p-c).n < T/2.
template <typename Fn>
void for_each_rect_pixel(Point2 c, Point2 u, double length, double thickness, Fn&& fn) {
  const Point2 n{-u.y, u.x};
  const double reach = 0.5 * (length + thickness) + 1.0;
  const int x0 = static_cast<int>(std::floor(c.x - reach));
  const int x1 = static_cast<int>(std::ceil(c.x + reach));
  const int y0 = static_cast<int>(std::floor(c.y - reach));
  const int y1 = static_cast<int>(std::ceil(c.y + reach));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - c.x, dy = y - c.y;
      const double along = dx * u.x + dy * u.y;
      const double across = dx * n.x + dy * n.y;
      if (along >= -0.5 * length && along < 0.5 * length && across >= -0.5 * thickness &&
          across < 0.5 * thickness) {
        fn(x, y);
      }
    }
  }
}

// Every pixel within half_width(spec) of a path sample.
template <typename Fn>
void for_each_mask_pixel(const LineSpec& spec, Fn&& fn) {
  const double r = half_width(spec);
  const int reach = static_cast<int>(std::ceil(r));
  const int samples = static_cast<int>(std::ceil(spec.length / kSampleStep));
  for (int i = 0; i <= samples; ++i) {
    const Point2 p = spec.point_at(std::min(spec.length, i * kSampleStep));
    const int cx = static_cast<int>(std::lround(p.x));
    const int cy = static_cast<int>(std::lround(p.y));
    for (int y = cy - reach - 1; y <= cy + reach + 1; ++y) {
      for (int x = cx - reach - 1; x <= cx + reach + 1; ++x) {
        const double dx = x - p.x, dy = y - p.y;
        if (dx * dx + dy * dy <= r * r) fn(x, y);
      }
    }
  }
}

}  // namespace

std::string to_string(LineKind kind) {
  switch (kind) {
    case LineKind::straight: return "straight";
    case LineKind::skewed: return "skewed";
    case LineKind::curved: return "curved";
  }
  return "straight";
}

LineKind parse_line_kind(const std::string& s) {
  if (s == "straight") return LineKind::straight;
  if (s == "skewed") return LineKind::skewed;
  if (s == "curved") return LineKind::curved;
  throw ContractError("unknown line kind '" + s + "'");
}

void LineSpec::validate() const {
  if (!(length > 0.0)) throw ContractError("line length must be positive");
  if (!(segment_length > 0.0)) throw ContractError("segment length must be positive");
  if (!(gap >= 0.0)) throw ContractError("gap must be non-negative");
  if (stroke_thickness < 1) throw ContractError("stroke thickness must be >= 1");
  if (!(mask_margin >= 0.0)) throw ContractError("mask margin must be non-negative");
  if (!(jitter >= 0.0 && jitter < segment_length)) {
    throw ContractError("jitter must lie in [0, segment_length)");
  }
  if (kind == LineKind::curved) {
    if (!(period > 0.0)) throw ContractError("curved line needs a positive period");
    if (!(amplitude >= 0.0 && amplitude < 0.5 * period)) {
      throw ContractError("curved line needs 0 <= amplitude < period / 2");
    }
  }
}

Point2 LineSpec::point_at(double s) const {
  const Point2 u = base_direction(*this);
  const Point2 n{-u.y, u.x};
  const double offset =
      kind == LineKind::curved ? amplitude * std::sin(2.0 * M_PI * s / period) : 0.0;
  return {start.x + s * u.x + offset * n.x, start.y + s * u.y + offset * n.y};
}

Point2 LineSpec::tangent_at(double s) const {
  const Point2 u = base_direction(*this);
  const Point2 n{-u.y, u.x};
  const double slope = kind == LineKind::curved
                           ? amplitude * 2.0 * M_PI / period * std::cos(2.0 * M_PI * s / period)
                           : 0.0;
  const Point2 t{u.x + slope * n.x, u.y + slope * n.y};
  const double norm = std::hypot(t.x, t.y);
  return {t.x / norm, t.y / norm};
}

SynthPage generate(const std::vector<LineSpec>& specs, int width, int height, std::uint64_t seed) {
  SynthPage out{BinaryRaster(width, height), LabelRaster(width, height), {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const LineSpec& spec = specs[i];
    spec.validate();
    const auto label = static_cast<std::uint32_t>(i + 1);
    const std::string name = "line " + std::to_string(i + 1);

    for_each_mask_pixel(spec, [&](int x, int y) {
      if (!out.gt_masks.contains(x, y)) {
        throw ContractError(name + " does not fit inside the " + std::to_string(width) + "x" +
                            std::to_string(height) + " page");
      }
      std::uint32_t& v = out.gt_masks(x, y);
      if (v != 0 && v != label) {
        throw GenerationError(name + " overlaps the mask of line " + std::to_string(v));
      }
      v = label;
    });

    double s0 = 0.0;
    while (s0 < spec.length) {
      const double seg = spec.segment_length + spec.jitter * unit(rng);
      const double s1 = std::min(s0 + seg, spec.length);
      const Point2 a = spec.point_at(s0);
      const Point2 b = spec.point_at(s1);
      Dash dash;
      dash.line = static_cast<int>(i + 1);
      dash.center = spec.point_at(0.5 * (s0 + s1));
      dash.direction = spec.tangent_at(0.5 * (s0 + s1));
      dash.length = std::hypot(b.x - a.x, b.y - a.y);
      for_each_rect_pixel(dash.center, dash.direction, dash.length, spec.stroke_thickness,
                          [&](int x, int y) {
                            if (!out.gt_masks.contains(x, y) || out.gt_masks(x, y) != label) {
                              throw GenerationError("a dash of " + name +
                                                    " leaves its ground-truth mask");
                            }
                            out.page.set(x, y);
                          });
      out.dashes.push_back(dash);
      s0 = s1 + spec.gap;
    }
  }
  return out;
}

std::vector<LineSpec> random_line_specs(std::uint64_t seed, int width, int height,
                                        const RandomPageOptions& options) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const double usable_width = width - 2.0 * options.margin;
  if (usable_width < 40.0) throw ContractError("page too narrow for random lines");

  std::vector<LineSpec> specs;
  double cursor = options.margin;
  int misses = 0;
  for (int kind_index = 0; misses < 100; ++kind_index) {
    LineSpec s;
    s.kind = static_cast<LineKind>(kind_index % 3);
    s.segment_length = std::round(uniform(8.0, 16.0));
    s.gap = std::round(uniform(2.0, options.max_gap));
    s.stroke_thickness = static_cast<int>(uniform(3.0, 5.99));
    s.length = std::round(uniform(0.4, 0.9) * usable_width);
    if (s.kind == LineKind::skewed) {
      const double magnitude = uniform(3.0, 15.0);
      s.angle_deg = (rng() & 1) ? magnitude : -magnitude;
    } else if (s.kind == LineKind::curved) {
      s.period = std::round(uniform(150.0, 300.0));
      s.amplitude = std::round(uniform(5.0, 15.0));
    }

    // Bounding box of the mask for start = (0, 0), then shift into place.
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (double t = 0.0; t <= s.length; t += 1.0) {
      const Point2 p = s.point_at(t);
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    const double r = half_width(s) + 2.0;
    const double box_w = x1 - x0 + 2 * r;
    const double box_h = y1 - y0 + 2 * r;
    if (cursor + box_h > height - options.margin) break;
    if (box_w > usable_width) {
      ++misses;
      continue;
    }
    const double left = options.margin + std::floor(uniform(0.0, usable_width - box_w));
    s.start = {std::round(left + r - x0), std::round(cursor + r - y0)};
    specs.push_back(s);
    cursor += box_h + options.line_spacing;
  }
  return specs;
}

}  // namespace linseg
