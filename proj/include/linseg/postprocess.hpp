#pragma once

#include <vector>

#include "linseg/ellipse.hpp"

namespace linseg {

struct PostprocessParams {
  int n_subsets = 10;
  double epsilon = 0.2;
  int kernel_length = 21;
  int kernel_thickness = 3;

  // Throws ContractError when a field is out of range.
  void validate() const;
};

struct OrientationSubset {
  int j = 1;                // 1..N
  Point2 v;                 // (cos(j*pi/N), sin(j*pi/N))
  Point2 kernel_direction;  // perpendicular to v, canonical half-plane
  std::vector<int> members; // component ids, ascending
};

// Probe vector of subset j out of n.
Point2 probe_vector(int j, int n);

// Membership test alpha^2 * |v . theta| < epsilon.
bool in_subset(const EllipseFit& fit, Point2 v, double epsilon);

// Subsets B_1..B_N. Subsets may intersect and need not cover every component.
std::vector<OrientationSubset> orientation_subsets(
    const std::vector<FittedComponent>& components, const PostprocessParams& params);

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

// Rasterized thick line segment centered at the origin: every integer offset
// p with -L/2 <= p.u < L/2 and -T/2 <= p.n < T/2, where u is the unit
// direction and n its normal. Odd L and T give a point-symmetric element;
// (1,0), L=5, T=1 is the 5-pixel horizontal run dx in [-2, 2].
std::vector<Offset> line_structuring_element(Point2 direction, int length, int thickness);

// Binary dilation (Minkowski sum) of `layer` with the line element.
BinaryRaster directional_dilate(const BinaryRaster& layer, Point2 direction,
                                int length, int thickness);

struct PostprocessResult {
  BinaryRaster mask;
  std::vector<FittedComponent> components;
  std::vector<OrientationSubset> subsets;
};

// Reconnects broken line masks: every orientation subset is drawn on its own
// layer, dilated along its members' common major-axis direction, and all
// layers are OR-ed with the input.
PostprocessResult postprocess(const BinaryRaster& predicted, const PostprocessParams& params,
                              Connectivity connectivity = Connectivity::eight);

BinaryRaster postprocess_mask(const BinaryRaster& predicted, const PostprocessParams& params);

}  // namespace linseg
