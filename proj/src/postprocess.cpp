#include "linseg/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace linseg {

void PostprocessParams::validate() const {
  if (n_subsets < 1) throw ContractError("n_subsets must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ContractError("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
  if (kernel_length < 1) throw ContractError("kernel_length must be >= 1");
  if (kernel_thickness < 1) throw ContractError("kernel_thickness must be >= 1");
}

Point2 probe_vector(int j, int n) {
  const double angle = j * M_PI / n;
  return {std::cos(angle), std::sin(angle)};
}

bool in_subset(const EllipseFit& fit, Point2 v, double epsilon) {
  const double dot = std::abs(v.x * fit.theta.x + v.y * fit.theta.y);
  return fit.alpha * fit.alpha * dot < epsilon;
}

std::vector<OrientationSubset> orientation_subsets(
    const std::vector<FittedComponent>& components, const PostprocessParams& params) {
  params.validate();
  std::vector<OrientationSubset> subsets;
  subsets.reserve(params.n_subsets);
  for (int j = 1; j <= params.n_subsets; ++j) {
    OrientationSubset s;
    s.j = j;
    s.v = probe_vector(j, params.n_subsets);
    s.kernel_direction = canonical_direction({-s.v.y, s.v.x});
    for (const FittedComponent& fc : components) {
      if (in_subset(fc.fit, s.v, params.epsilon)) s.members.push_back(fc.component.id);
    }
    std::sort(s.members.begin(), s.members.end());
    subsets.push_back(std::move(s));
  }
  return subsets;
}

std::vector<Offset> line_structuring_element(Point2 direction, int length, int thickness) {
  if (length < 1 || thickness < 1) {
    throw ContractError("structuring element length and thickness must be >= 1");
  }
  const double norm = std::hypot(direction.x, direction.y);
  if (!(norm > 0.0)) throw ContractError("structuring element direction must be non-zero");
  const Point2 u{direction.x / norm, direction.y / norm};
  const Point2 n{-u.y, u.x};
  constexpr double kTol = 1e-9;
  const double half_len = 0.5 * length;
  const double half_thick = 0.5 * thickness;
  const int reach = static_cast<int>(std::ceil(half_len + half_thick)) + 1;

  std::vector<Offset> se;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const double along = dx * u.x + dy * u.y;
      const double across = dx * n.x + dy * n.y;
      if (along >= -half_len - kTol && along < half_len - kTol &&
          across >= -half_thick - kTol && across < half_thick - kTol) {
        se.push_back({dx, dy});
      }
    }
  }
  return se;
}

namespace {

// Horizontal runs [dx_lo, dx_hi] of the structuring element at one dy.
struct Run {
  int dy;
  int dx_lo;
  int dx_hi;
};

std::vector<Run> runs_of(std::vector<Offset> se) {
  std::sort(se.begin(), se.end(), [](Offset a, Offset b) {
    return a.dy != b.dy ? a.dy < b.dy : a.dx < b.dx;
  });
  std::vector<Run> runs;
  for (const Offset& o : se) {
    if (!runs.empty() && runs.back().dy == o.dy && runs.back().dx_hi + 1 == o.dx) {
      runs.back().dx_hi = o.dx;
    } else {
      runs.push_back({o.dy, o.dx, o.dx});
    }
  }
  return runs;
}

}  // namespace

BinaryRaster directional_dilate(const BinaryRaster& layer, Point2 direction, int length,
                                int thickness) {
  const std::vector<Run> runs = runs_of(line_structuring_element(direction, length, thickness));
  const int w = layer.width();
  const int h = layer.height();
  BinaryRaster out(w, h);

  std::vector<int> prefix(static_cast<std::size_t>(w) + 1);
  for (int sy = 0; sy < h; ++sy) {
    const auto src = layer.row(sy);
    if (std::none_of(src.begin(), src.end(), [](std::uint8_t v) { return v != 0; })) {
      continue;
    }
    prefix[0] = 0;
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + (src[x] ? 1 : 0);

    // out(x, sy + dy) |= any src[x - dx_hi .. x - dx_lo]
    for (const Run& r : runs) {
      const int ty = sy + r.dy;
      if (ty < 0 || ty >= h) continue;
      auto dst = out.row(ty);
      for (int x = 0; x < w; ++x) {
        const int lo = std::max(0, x - r.dx_hi);
        const int hi = std::min(w - 1, x - r.dx_lo);
        if (lo <= hi && prefix[hi + 1] - prefix[lo] > 0) dst[x] = 1;
      }
    }
  }
  return out;
}

PostprocessResult postprocess(const BinaryRaster& predicted, const PostprocessParams& params,
                              Connectivity connectivity) {
  params.validate();
  PostprocessResult result{predicted, {}, {}};
  result.components = fit_components(connected_components(predicted, connectivity));
  result.subsets = orientation_subsets(result.components, params);

  std::map<int, const Component*> by_id;
  for (const FittedComponent& fc : result.components) by_id[fc.component.id] = &fc.component;

  for (const OrientationSubset& s : result.subsets) {
    if (s.members.empty()) continue;
    BinaryRaster layer(predicted.width(), predicted.height());
    for (int id : s.members) {
      for (const Pixel& p : by_id.at(id)->pixels) layer.set(p.x, p.y);
    }
    result.mask |= directional_dilate(layer, s.kernel_direction, params.kernel_length,
                                      params.kernel_thickness);
  }
  return result;
}

BinaryRaster postprocess_mask(const BinaryRaster& predicted, const PostprocessParams& params) {
  return postprocess(predicted, params).mask;
}

}  // namespace linseg
