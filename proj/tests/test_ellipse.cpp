#include <doctest.h>

#include <cmath>
#include <random>

#include "linseg/ellipse.hpp"
#include "oracles/moments.hpp"
#include "support.hpp"

using namespace linseg;

namespace {

std::vector<Point2> ellipse_points(Point2 c, double a, double b, double phi, int n,
                                   double t0 = 0.0) {
  std::vector<Point2> pts;
  for (int k = 0; k < n; ++k) {
    const double t = t0 + 2.0 * M_PI * k / n;
    const double x = a * std::cos(t), y = b * std::sin(t);
    pts.push_back({c.x + x * std::cos(phi) - y * std::sin(phi),
                   c.y + x * std::sin(phi) + y * std::cos(phi)});
  }
  return pts;
}

// Angle difference of two undirected axes, in degrees, in [0, 90].
double axis_gap_deg(Point2 u, double angle) {
  double d = std::fmod(std::abs(std::atan2(u.y, u.x) - angle), M_PI);
  if (d > M_PI / 2) d = M_PI - d;
  return d * 180.0 / M_PI;
}

std::vector<std::pair<double, double>> as_pairs(const std::vector<Pixel>& px) {
  std::vector<std::pair<double, double>> out;
  for (const Pixel& p : px) out.push_back({double(p.x), double(p.y)});
  return out;
}

Component bar(int w, int h) {
  BinaryRaster img(w + 4, h + 4);
  testing::fill_rect(img, 2, 2, w, h);
  return connected_components(img).front();
}

}  // namespace

TEST_CASE("axis-aligned ellipse a=10 b=4") {
  auto pts = ellipse_points({0, 0}, 10, 4, 0, 12);
  EllipseFit f = fit_ellipse(pts);
  CHECK(f.method == FitMethod::direct);
  CHECK(std::abs(f.center.x) < 1e-6);
  CHECK(std::abs(f.center.y) < 1e-6);
  CHECK(std::abs(f.r_major - 10) < 1e-6);
  CHECK(std::abs(f.r_minor - 4) < 1e-6);
  CHECK(std::abs(f.theta.x - 1) < 1e-6);
  CHECK(std::abs(f.theta.y) < 1e-6);
  CHECK(algebraic_residual(pts, f.conic) < 1e-9);
  for (const Point2& p : pts) CHECK(std::abs(f.conic(p)) < 1e-9);
}

TEST_CASE("rotated by 30 degrees") {
  const double phi = M_PI / 6;
  EllipseFit f = fit_ellipse(ellipse_points({0, 0}, 10, 4, phi, 12));
  CHECK(std::abs(f.r_major - 10) < 1e-6);
  CHECK(std::abs(f.r_minor - 4) < 1e-6);
  CHECK(std::abs(f.theta.x - std::cos(phi)) < 1e-6);
  CHECK(std::abs(f.theta.y - std::sin(phi)) < 1e-6);
}

TEST_CASE("collinear points fall back to moments") {
  std::vector<Point2> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({double(i), double(i)});
  EllipseFit f = fit_ellipse(pts);
  CHECK(f.method == FitMethod::moments);
  CHECK(f.theta.x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(f.theta.y == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(axis_gap_deg(f.theta, oracle::principal_angle({{0, 0}, {1, 1}, {5, 5}, {9, 9}})) < 1e-3);
  CHECK_THROWS_AS(fit_ellipse(pts, false), DegenerateInputError);
}

TEST_CASE("degenerate input") {
  std::vector<Point2> one = {{2, 3}};
  CHECK_THROWS_AS(fit_ellipse(one), DegenerateInputError);
  std::vector<Point2> same = {{2, 3}, {2, 3}, {2, 3}};
  CHECK_THROWS_AS(fit_ellipse(same), DegenerateInputError);
  std::vector<Point2> two = {{0, 0}, {4, 0}};
  EllipseFit f = fit_ellipse(two);
  CHECK(f.method == FitMethod::moments);
  CHECK(f.theta.x == doctest::Approx(1.0));
  CHECK(f.r_major > f.r_minor);
  CHECK(f.r_minor > 0);
}

TEST_CASE("alpha values") {
  CHECK(alpha(5, 5) == 0.5);
  CHECK(alpha(3, 1) == 0.75);
  CHECK(alpha(99, 1) == doctest::Approx(0.99).epsilon(1e-15));
}

TEST_CASE("horizontal and vertical bars") {
  Component h = bar(20, 2);
  EllipseFit fh = fit_component(h);
  const double ref_h = oracle::principal_angle(as_pairs(h.pixels));
  CHECK(axis_gap_deg(fh.theta, 0.0) < 2.0);
  CHECK(axis_gap_deg(fh.theta, ref_h) < 2.0);
  CHECK(fh.alpha > 0.75);

  Component v = bar(2, 20);
  EllipseFit fv = fit_component(v);
  CHECK(axis_gap_deg(fv.theta, M_PI / 2) < 2.0);
  CHECK(fv.alpha > 0.75);
}

TEST_CASE("square blob is near isotropic") {
  Component sq = bar(5, 5);
  CHECK(oracle::isotropy(as_pairs(sq.pixels)) == doctest::Approx(1.0));
  CHECK(fit_component(sq).alpha < 0.6);
  CHECK(fit_component(sq, FitPoints::all_pixels).alpha < 0.6);
}

TEST_CASE("single pixel convention") {
  BinaryRaster img(3, 3);
  img.set(1, 1);
  EllipseFit f = fit_component(connected_components(img).front());
  CHECK(f.method == FitMethod::single_pixel);
  CHECK(f.alpha == 0.5);
  CHECK(f.theta.x == 1.0);
  CHECK(f.theta.y == 0.0);
  CHECK(f.center.x == 1.0);
}

TEST_CASE("canonical direction") {
  CHECK(canonical_direction({0, -1}).y == 1.0);
  CHECK(canonical_direction({-1, 0}).x == 1.0);
  CHECK(canonical_direction({-1, 1e-13}).x == 1.0);
  CHECK(canonical_direction({-1, 1e-13}).y == 0.0);
  CHECK(canonical_direction({0.6, -0.8}).x == -0.6);
}

TEST_CASE("translation, rotation and scale") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = 3 + 30 * u(rng);
    const double b = a * (0.2 + 0.7 * u(rng));
    const double phi = M_PI * u(rng);
    auto pts = ellipse_points({50 * u(rng), 50 * u(rng)}, a, b, phi, 20, u(rng));
    EllipseFit base = fit_ellipse(pts);
    REQUIRE(base.method == FitMethod::direct);

    const Point2 shift{17.25, -8.5};
    std::vector<Point2> moved;
    for (auto p : pts) moved.push_back({p.x + shift.x, p.y + shift.y});
    EllipseFit t = fit_ellipse(moved);
    CHECK(std::abs(t.center.x - base.center.x - shift.x) < 1e-9);
    CHECK(std::abs(t.center.y - base.center.y - shift.y) < 1e-9);
    CHECK(std::abs(t.r_major - base.r_major) < 1e-9);
    CHECK(std::abs(t.r_minor - base.r_minor) < 1e-9);
    CHECK(std::abs(t.alpha - base.alpha) < 1e-9);
    CHECK(axis_gap_deg(t.theta, std::atan2(base.theta.y, base.theta.x)) < 1e-7);

    const double rot = 2 * M_PI * u(rng);
    std::vector<Point2> turned;
    for (auto p : pts) {
      turned.push_back({p.x * std::cos(rot) - p.y * std::sin(rot),
                        p.x * std::sin(rot) + p.y * std::cos(rot)});
    }
    EllipseFit r = fit_ellipse(turned);
    CHECK(std::abs(r.r_major - base.r_major) < 1e-6);
    CHECK(std::abs(r.r_minor - base.r_minor) < 1e-6);
    CHECK(axis_gap_deg(r.theta, std::atan2(base.theta.y, base.theta.x) + rot) < 1e-6);

    const double s = 0.5 + 3 * u(rng);
    std::vector<Point2> scaled;
    for (auto p : pts) scaled.push_back({p.x * s, p.y * s});
    EllipseFit sc = fit_ellipse(scaled);
    CHECK(std::abs(sc.center.x - s * base.center.x) < 1e-6);
    CHECK(std::abs(sc.r_major - s * base.r_major) < 1e-6);
    CHECK(std::abs(sc.r_minor - s * base.r_minor) < 1e-6);
    CHECK(std::abs(sc.alpha - base.alpha) < 1e-9);
  }
}

TEST_CASE("alpha range over random clouds") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const int count = 2 + static_cast<int>(rng() % 40);
    const double sx = 0.1 + std::abs(n(rng)) * 10, sy = 0.1 + std::abs(n(rng)) * 10;
    std::vector<Point2> pts;
    for (int i = 0; i < count; ++i) pts.push_back({sx * n(rng), sy * n(rng)});
    EllipseFit f = fit_ellipse(pts);
    CHECK(f.alpha >= 0.5);
    CHECK(f.alpha < 1.0);
    CHECK(f.r_major >= f.r_minor);
    CHECK(f.r_minor > 0);
    CHECK(std::hypot(f.theta.x, f.theta.y) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((f.theta.y > 0 || (f.theta.y == 0 && f.theta.x > 0)));
  }
}

TEST_CASE("random pixel components give valid fits") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryRaster img = testing::random_binary(rng, 30, 30, 0.55);
    for (const FittedComponent& fc : fit_components(connected_components(img))) {
      CHECK(fc.fit.alpha >= 0.5);
      CHECK(fc.fit.alpha < 1.0);
      CHECK(fc.fit.r_minor > 0);
    }
  }
}
