#pragma once

#include <vector>

#include "linseg/raster.hpp"

namespace linseg {

enum class Connectivity { four = 4, eight = 8 };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// A maximal connected set of foreground pixels. Pixels are stored in raster
// order (ascending y, then x), so pixels.front() is the first pixel met by a
// raster scan.
struct Component {
  int id = 0;
  std::vector<Pixel> pixels;
  BBox bbox;
  Point2 centroid;

  std::size_t area() const { return pixels.size(); }
};

// Labels every connected foreground region with ids 1..K, numbered by the
// raster-scan position of each region's first pixel.
LabelRaster label_components(const BinaryRaster& img,
                             Connectivity connectivity = Connectivity::eight);

// Component list for `img`, ids as in label_components().
std::vector<Component> connected_components(
    const BinaryRaster& img, Connectivity connectivity = Connectivity::eight);

// Extracts the components of an already labeled raster, one per label id in
// 1..max_label (labels that do not occur are skipped). Pixels of one label
// are not required to be connected.
std::vector<Component> components_from_labels(const LabelRaster& labels);

// Pixels of `c` that have at least one 4-neighbour outside `c`.
std::vector<Pixel> boundary_pixels(const Component& c);

}  // namespace linseg
