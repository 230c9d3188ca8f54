#pragma once

#include <array>
#include <span>
#include <vector>

#include "linseg/components.hpp"

namespace linseg {

// General conic a x^2 + b xy + c y^2 + d x + e y + f = 0.
struct Conic {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;

  double operator()(Point2 p) const {
    return a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f;
  }
};

enum class FitMethod { direct, moments, single_pixel };

struct EllipseFit {
  Point2 center;
  double r_major = 0.0;  // semi-axis lengths in pixels
  double r_minor = 0.0;
  // Unit vector along the major axis, canonicalized to y > 0 or (y == 0, x > 0).
  Point2 theta{1.0, 0.0};
  double alpha = 0.5;
  FitMethod method = FitMethod::direct;
  // Only meaningful for FitMethod::direct; normalized so that 4ac - b^2 = 1.
  Conic conic;
};

// Elongation confidence R_maj / (R_maj + R_min), in [0.5, 1).
double alpha(const EllipseFit& fit);
double alpha(double r_major, double r_minor);

// Direct constrained least-squares ellipse fit (4ac - b^2 = 1) via the
// reduced 3x3 eigenproblem. Points are centered and scaled to unit RMS
// radius before the fit. If fewer than 6 points are given or no admissible
// ellipse exists and `moment_fallback` is set, the second-central-moment
// fit is returned instead; otherwise DegenerateInputError is thrown.
// Fewer than 2 distinct points always throws DegenerateInputError.
EllipseFit fit_ellipse(std::span<const Point2> points, bool moment_fallback = true);

// Ellipse from second central moments, treating each point as a unit pixel
// square (adds 1/12 to the variance along every axis). Radii are
// 2 * sqrt(eigenvalue), the semi-axes of the uniformly filled ellipse with
// the same moments.
EllipseFit fit_moments(std::span<const Point2> points);

enum class FitPoints { boundary, all_pixels };

// Fits a component: boundary pixels by default. Components with fewer than
// 6 fitting pixels, or whose direct fit is not an ellipse consistent with the
// component extent, use the moment fit over all pixels. A single pixel gives
// alpha = 0.5 and theta = (1, 0).
EllipseFit fit_component(const Component& c, FitPoints which = FitPoints::boundary);

struct FittedComponent {
  Component component;
  EllipseFit fit;
};

std::vector<FittedComponent> fit_components(std::vector<Component> components,
                                            FitPoints which = FitPoints::boundary);

// Sum of squared conic values over the points (the minimized algebraic
// residual).
double algebraic_residual(std::span<const Point2> points, const Conic& conic);

// Flips `v` into the canonical half-plane; components with |v.y| <= 1e-12
// count as zero.
Point2 canonical_direction(Point2 v);

}  // namespace linseg
