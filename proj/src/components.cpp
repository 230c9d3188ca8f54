#include "linseg/components.hpp"

#include <numeric>

namespace linseg {
namespace {

// Union-find over provisional labels. The root of a set is always its
// smallest member, which keeps the final numbering in raster order.
class LabelEquivalence {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

LabelRaster label_components(const BinaryRaster& img, Connectivity connectivity) {
  const int w = img.width();
  const int h = img.height();
  LabelRaster labels(w, h);
  LabelEquivalence eq;
  eq.make();  // provisional 0 = background
  const bool eight = connectivity == Connectivity::eight;

  // First pass: provisional labels from the already visited neighbours
  // (west, north-west, north, north-east).
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.test(x, y)) continue;
      std::uint32_t label = 0;
      auto visit = [&](int nx, int ny) {
        if (!labels.contains(nx, ny)) return;
        const std::uint32_t n = labels(nx, ny);
        if (n == 0) return;
        label = label == 0 ? eq.find(n) : eq.merge(label, n);
      };
      visit(x - 1, y);
      visit(x, y - 1);
      if (eight) {
        visit(x - 1, y - 1);
        visit(x + 1, y - 1);
      }
      labels(x, y) = label == 0 ? eq.make() : label;
    }
  }

  // Second pass: resolve to roots and renumber by first appearance.
  std::vector<std::uint32_t> final_id(eq.size(), 0);
  std::uint32_t next = 1;
  for (auto& v : labels.pixels()) {
    if (v == 0) continue;
    const std::uint32_t root = eq.find(v);
    if (final_id[root] == 0) final_id[root] = next++;
    v = final_id[root];
  }
  return labels;
}

std::vector<Component> components_from_labels(const LabelRaster& labels) {
  const std::uint32_t max_label = labels.max_label();
  std::vector<Component> by_label(max_label + 1);
  for (int y = 0; y < labels.height(); ++y) {
    const auto row = labels.row(y);
    for (int x = 0; x < labels.width(); ++x) {
      if (row[x] != 0) by_label[row[x]].pixels.push_back({x, y});
    }
  }

  std::vector<Component> out;
  for (std::uint32_t id = 1; id <= max_label; ++id) {
    Component& c = by_label[id];
    if (c.pixels.empty()) continue;
    c.id = static_cast<int>(id);
    c.bbox = {c.pixels.front().x, c.pixels.front().y, c.pixels.front().x,
              c.pixels.front().y};
    double sx = 0.0, sy = 0.0;
    for (const Pixel& p : c.pixels) {
      c.bbox.x0 = std::min(c.bbox.x0, p.x);
      c.bbox.x1 = std::max(c.bbox.x1, p.x);
      c.bbox.y0 = std::min(c.bbox.y0, p.y);
      c.bbox.y1 = std::max(c.bbox.y1, p.y);
      sx += p.x;
      sy += p.y;
    }
    const auto n = static_cast<double>(c.pixels.size());
    c.centroid = {sx / n, sy / n};
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Component> connected_components(const BinaryRaster& img,
                                            Connectivity connectivity) {
  return components_from_labels(label_components(img, connectivity));
}

std::vector<Pixel> boundary_pixels(const Component& c) {
  const BBox& b = c.bbox;
  // Local occupancy grid with a one-pixel frame.
  const int w = b.width() + 2;
  const int h = b.height() + 2;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(w) * h, 0);
  auto at = [&](int x, int y) -> std::uint8_t& {
    return inside[static_cast<std::size_t>(y - b.y0 + 1) * w + (x - b.x0 + 1)];
  };
  for (const Pixel& p : c.pixels) at(p.x, p.y) = 1;

  std::vector<Pixel> out;
  for (const Pixel& p : c.pixels) {
    if (!at(p.x - 1, p.y) || !at(p.x + 1, p.y) || !at(p.x, p.y - 1) ||
        !at(p.x, p.y + 1)) {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace linseg
