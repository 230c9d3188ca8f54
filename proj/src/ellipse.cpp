#include "linseg/ellipse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>

namespace linseg {
namespace {

constexpr double kPixelVariance = 1.0 / 12.0;
constexpr int kMinDirectPoints = 6;

struct Normalization {
  Point2 mean;
  double scale = 1.0;  // RMS distance to the mean
};

Normalization normalization_of(std::span<const Point2> points) {
  Normalization n;
  for (const Point2& p : points) {
    n.mean.x += p.x;
    n.mean.y += p.y;
  }
  const auto count = static_cast<double>(points.size());
  n.mean.x /= count;
  n.mean.y /= count;
  double ss = 0.0;
  for (const Point2& p : points) {
    const double dx = p.x - n.mean.x, dy = p.y - n.mean.y;
    ss += dx * dx + dy * dy;
  }
  n.scale = std::sqrt(ss / count);
  return n;
}

bool has_two_distinct(std::span<const Point2> points) {
  for (const Point2& p : points) {
    if (p.x != points.front().x || p.y != points.front().y) return true;
  }
  return false;
}

// Eigen decomposition of the symmetric matrix [[a, b], [b, c]].
struct Sym2Eigen {
  double lambda_max;
  double lambda_min;
  double angle_max;  // direction of the lambda_max eigenvector
};

Sym2Eigen sym2_eigen(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean + radius, mean - radius, 0.5 * std::atan2(2.0 * b, a - c)};
}

Point2 unit_at(double angle) {
  return canonical_direction({std::cos(angle), std::sin(angle)});
}

// Center, semi-axes and major direction of an ellipse-type conic. Returns
// nullopt when the conic is imaginary or degenerate.
std::optional<EllipseFit> geometric_parameters(Conic q) {
  const double det = 4.0 * q.a * q.c - q.b * q.b;
  if (!(det > 0.0)) return std::nullopt;
  if (q.a < 0.0) q = {-q.a, -q.b, -q.c, -q.d, -q.e, -q.f};

  EllipseFit fit;
  fit.center = {(q.b * q.e - 2.0 * q.c * q.d) / det,
                (q.b * q.d - 2.0 * q.a * q.e) / det};
  const double f0 = q.f + 0.5 * (q.d * fit.center.x + q.e * fit.center.y);
  const Sym2Eigen eig = sym2_eigen(q.a, 0.5 * q.b, q.c);
  if (!(f0 < 0.0) || !(eig.lambda_min > 0.0)) return std::nullopt;

  fit.r_major = std::sqrt(-f0 / eig.lambda_min);
  fit.r_minor = std::sqrt(-f0 / eig.lambda_max);
  // The major axis is the eigenvector of the smaller eigenvalue.
  fit.theta = unit_at(eig.angle_max + 0.5 * M_PI);
  if (!std::isfinite(fit.r_major) || !std::isfinite(fit.r_minor)) return std::nullopt;
  return fit;
}

// Conic in normalized coordinates q = (p - mean) / scale, re-expressed in the
// original coordinates.
Conic denormalize(const Conic& n, const Normalization& norm) {
  const double s = norm.scale, s2 = s * s;
  const double mx = norm.mean.x, my = norm.mean.y;
  Conic o;
  o.a = n.a / s2;
  o.b = n.b / s2;
  o.c = n.c / s2;
  o.d = (-2.0 * n.a * mx - n.b * my) / s2 + n.d / s;
  o.e = (-2.0 * n.c * my - n.b * mx) / s2 + n.e / s;
  o.f = (n.a * mx * mx + n.b * mx * my + n.c * my * my) / s2 -
        (n.d * mx + n.e * my) / s + n.f;
  // 4ac - b^2 scales by 1/s^4; restore the unit constraint.
  o.a *= s2; o.b *= s2; o.c *= s2; o.d *= s2; o.e *= s2; o.f *= s2;
  return o;
}

// Constrained minimizer of |D a|^2 subject to 4ac - b^2 = 1, through the
// block decomposition of the 6x6 generalized eigenproblem into a 3x3
// standard one. Expects normalized points.
std::optional<Conic> direct_conic(std::span<const Point2> q) {
  Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
  for (const Point2& p : q) {
    const Eigen::Vector3d quad(p.x * p.x, p.x * p.y, p.y * p.y);
    const Eigen::Vector3d lin(p.x, p.y, 1.0);
    s1 += quad * quad.transpose();
    s2 += quad * lin.transpose();
    s3 += lin * lin.transpose();
  }

  Eigen::FullPivLU<Eigen::Matrix3d> s3_lu(s3);
  s3_lu.setThreshold(1e-10);
  if (s3_lu.rank() < 3) return std::nullopt;  // collinear input
  const Eigen::Matrix3d t = -s3_lu.solve(s2.transpose());
  const Eigen::Matrix3d reduced = s1 + s2 * t;

  // Premultiply by the inverse of the 3x3 constraint block
  // [[0, 0, 2], [0, -1, 0], [2, 0, 0]].
  Eigen::Matrix3d m;
  m.row(0) = reduced.row(2) / 2.0;
  m.row(1) = -reduced.row(1);
  m.row(2) = reduced.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
  if (solver.info() != Eigen::Success) return std::nullopt;

  std::optional<Eigen::Vector3d> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const auto& value = solver.eigenvalues()[i];
    if (std::abs(value.imag()) > 1e-9 * (1.0 + std::abs(value.real()))) continue;
    const Eigen::Vector3d v = solver.eigenvectors().col(i).real();
    const double cond = 4.0 * v[0] * v[2] - v[1] * v[1];
    if (!(cond > 0.0)) continue;
    // Residual per unit constraint; picks the admissible minimizer even when
    // rounding leaves more than one vector with cond > 0.
    const double cost = v.dot(reduced * v) / cond;
    if (cost < best_cost) {
      best_cost = cost;
      best = v / std::sqrt(cond);
    }
  }
  if (!best) return std::nullopt;
  const Eigen::Vector3d quad = *best;
  const Eigen::Vector3d lin = t * quad;
  return Conic{quad[0], quad[1], quad[2], lin[0], lin[1], lin[2]};
}

std::vector<Point2> to_points(const std::vector<Pixel>& pixels) {
  std::vector<Point2> pts;
  pts.reserve(pixels.size());
  for (const Pixel& p : pixels) pts.push_back({double(p.x), double(p.y)});
  return pts;
}

}  // namespace

Point2 canonical_direction(Point2 v) {
  const double norm = std::hypot(v.x, v.y);
  if (norm > 0.0) {
    v.x /= norm;
    v.y /= norm;
  }
  if (std::abs(v.y) <= 1e-12) {
    v.y = 0.0;
    v.x = 1.0;
  }
  if (v.y < 0.0) {
    v.x = -v.x;
    v.y = -v.y;
  }
  return v;
}

double alpha(double r_major, double r_minor) { return r_major / (r_major + r_minor); }

double alpha(const EllipseFit& fit) { return alpha(fit.r_major, fit.r_minor); }

double algebraic_residual(std::span<const Point2> points, const Conic& conic) {
  double sum = 0.0;
  for (const Point2& p : points) {
    const double v = conic(p);
    sum += v * v;
  }
  return sum;
}

EllipseFit fit_moments(std::span<const Point2> points) {
  if (points.empty()) throw DegenerateInputError("moment fit of an empty point set");
  const Normalization norm = normalization_of(points);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Point2& p : points) {
    const double dx = p.x - norm.mean.x, dy = p.y - norm.mean.y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const auto n = static_cast<double>(points.size());
  const Sym2Eigen eig = sym2_eigen(sxx / n + kPixelVariance, sxy / n,
                                   syy / n + kPixelVariance);
  EllipseFit fit;
  fit.method = FitMethod::moments;
  fit.center = norm.mean;
  fit.r_major = 2.0 * std::sqrt(eig.lambda_max);
  fit.r_minor = 2.0 * std::sqrt(std::max(eig.lambda_min, kPixelVariance));
  fit.theta = unit_at(eig.angle_max);
  fit.alpha = alpha(fit);
  return fit;
}

EllipseFit fit_ellipse(std::span<const Point2> points, bool moment_fallback) {
  if (points.empty() || !has_two_distinct(points)) {
    throw DegenerateInputError("ellipse fit needs at least 2 distinct points");
  }
  auto fallback = [&](const char* why) {
    if (!moment_fallback) throw DegenerateInputError(why);
    return fit_moments(points);
  };
  if (points.size() < kMinDirectPoints) {
    return fallback("direct ellipse fit needs at least 6 points");
  }

  const Normalization norm = normalization_of(points);
  std::vector<Point2> q;
  q.reserve(points.size());
  for (const Point2& p : points) {
    q.push_back({(p.x - norm.mean.x) / norm.scale, (p.y - norm.mean.y) / norm.scale});
  }
  const std::optional<Conic> conic = direct_conic(q);
  if (!conic) return fallback("no admissible ellipse for the given points");
  std::optional<EllipseFit> fit = geometric_parameters(*conic);
  if (!fit) return fallback("fitted conic is not a real ellipse");

  fit->center = {norm.mean.x + norm.scale * fit->center.x,
                 norm.mean.y + norm.scale * fit->center.y};
  fit->r_major *= norm.scale;
  fit->r_minor *= norm.scale;
  fit->alpha = alpha(*fit);
  fit->method = FitMethod::direct;
  fit->conic = denormalize(*conic, norm);
  return *fit;
}

EllipseFit fit_component(const Component& c, FitPoints which) {
  if (c.pixels.empty()) throw ContractError("fit of an empty component");
  const std::vector<Point2> all = to_points(c.pixels);
  if (c.pixels.size() == 1) {
    EllipseFit fit = fit_moments(all);
    fit.method = FitMethod::single_pixel;
    fit.theta = {1.0, 0.0};
    fit.alpha = 0.5;
    return fit;
  }

  const std::vector<Point2> pts =
      which == FitPoints::boundary ? to_points(boundary_pixels(c)) : all;
  if (pts.size() >= kMinDirectPoints) {
    try {
      EllipseFit fit = fit_ellipse(pts, /*moment_fallback=*/false);
      // Reject fits that do not describe the component: center outside the
      // bounding box or an axis longer than the box diagonal. This happens
      // for nearly straight pixel runs, where the constrained conic
      // degenerates towards a huge flat ellipse.
      const BBox& b = c.bbox;
      const double diagonal = std::hypot(b.width(), b.height());
      const bool center_inside = fit.center.x >= b.x0 - 0.5 && fit.center.x <= b.x1 + 0.5 &&
                                 fit.center.y >= b.y0 - 0.5 && fit.center.y <= b.y1 + 0.5;
      if (center_inside && fit.r_major <= diagonal) return fit;
    } catch (const DegenerateInputError&) {
    }
  }
  return fit_moments(all);
}

std::vector<FittedComponent> fit_components(std::vector<Component> components,
                                            FitPoints which) {
  std::vector<FittedComponent> out;
  out.reserve(components.size());
  for (Component& c : components) {
    EllipseFit fit = fit_component(c, which);
    out.push_back({std::move(c), fit});
  }
  return out;
}

}  // namespace linseg
