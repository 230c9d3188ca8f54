#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "linseg/postprocess.hpp"
#include "oracles/flood_fill.hpp"
#include "oracles/minkowski.hpp"
#include "support.hpp"

using namespace linseg;

namespace {

EllipseFit fit_with(Point2 theta, double a) {
  EllipseFit f;
  f.theta = theta;
  f.alpha = a;
  return f;
}

// Five 10x3 dashes with 4 px gaps starting at (x0, y0).
void dashed_line(BinaryRaster& img, int x0, int y0) {
  for (int k = 0; k < 5; ++k) testing::fill_rect(img, x0 + 14 * k, y0, 10, 3);
}

PostprocessParams fixture_params(int thickness = 3) {
  PostprocessParams p;
  p.n_subsets = 10;
  p.epsilon = 0.2;
  p.kernel_length = 9;
  p.kernel_thickness = thickness;
  return p;
}

std::vector<oracle::Off> to_oracle(const std::vector<Offset>& se) {
  std::vector<oracle::Off> out;
  for (auto o : se) out.push_back({o.dx, o.dy});
  return out;
}

}  // namespace

TEST_CASE("subset membership examples") {
  CHECK(in_subset(fit_with({1, 0}, 1.0), {0, 1}, 0.2));
  CHECK_FALSE(in_subset(fit_with({0, 1}, 0.8), {0, 1}, 0.2));
}

TEST_CASE("probe vectors for N=2") {
  Point2 v1 = probe_vector(1, 2), v2 = probe_vector(2, 2);
  CHECK(std::abs(v1.x) < 1e-15);
  CHECK(v1.y == 1.0);
  CHECK(v2.x == -1.0);
  CHECK(std::abs(v2.y) < 1e-15);
}

TEST_CASE("orientation selectivity") {
  // |v.theta| = 1 and alpha >= sqrt(eps): never a member.
  for (int n : {1, 4, 10, 12}) {
    for (int j = 1; j <= n; ++j) {
      Point2 v = probe_vector(j, n);
      double edge = std::sqrt(0.2);
      while (edge * edge < 0.2) edge = std::nextafter(edge, 1.0);
      for (double a : {edge, 0.6, 0.9}) {
        CHECK_FALSE(in_subset(fit_with(canonical_direction(v), a), v, 0.2));
      }
    }
  }
}

TEST_CASE("params validation") {
  PostprocessParams p;
  p.n_subsets = 0;
  CHECK_THROWS_AS(p.validate(), ContractError);
  p = {};
  p.epsilon = 1.5;
  CHECK_THROWS_AS(p.validate(), ContractError);
  p = {};
  p.kernel_length = 0;
  CHECK_THROWS_AS(p.validate(), ContractError);
}

TEST_CASE("structuring element matches geometric lattice") {
  for (int deg = 0; deg < 180; deg += 7) {
    const double a = deg * M_PI / 180.0;
    for (auto [l, t] : {std::pair{9, 3}, {21, 3}, {5, 1}, {8, 2}}) {
      auto ours = line_structuring_element({std::cos(a), std::sin(a)}, l, t);
      auto ref = oracle::segment_lattice(a, l, t);
      auto key = [](auto o) { return std::pair{o.dy, o.dx}; };
      std::vector<std::pair<int, int>> x, y;
      for (auto o : ours) x.push_back(key(o));
      for (auto o : ref) y.push_back(key(o));
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      CHECK(x == y);
    }
  }
}

TEST_CASE("dilation examples") {
  BinaryRaster empty(9, 9);
  CHECK(directional_dilate(empty, {1, 0}, 5, 1).count() == 0);

  BinaryRaster one(9, 3);
  one.set(4, 1);
  BinaryRaster d = directional_dilate(one, {1, 0}, 5, 1);
  CHECK(d.count() == 5);
  for (int x = 2; x <= 6; ++x) CHECK(d.test(x, 1));

  BinaryRaster two(12, 3);
  two.set(3, 1);
  two.set(7, 1);
  BinaryRaster d2 = directional_dilate(two, {1, 0}, 5, 1);
  auto ref = oracle::minkowski(testing::bits(two), 12, 3,
                               to_oracle(line_structuring_element({1, 0}, 5, 1)));
  CHECK(testing::bits(d2) == ref);
  CHECK(connected_components(d2).size() == 1);
}

TEST_CASE("dilation equals brute-force Minkowski sum") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 5 + static_cast<int>(rng() % 40), h = 5 + static_cast<int>(rng() % 40);
    BinaryRaster img = testing::random_binary(rng, w, h, 0.03);
    const double a = (rng() % 3600) * M_PI / 3600.0;
    const int l = 1 + static_cast<int>(rng() % 25), t = 1 + static_cast<int>(rng() % 5);
    const Point2 dir{std::cos(a), std::sin(a)};
    BinaryRaster ours = directional_dilate(img, dir, l, t);
    auto ref = oracle::minkowski(testing::bits(img), w, h, oracle::segment_lattice(a, l, t));
    REQUIRE(testing::bits(ours) == ref);
  }
}

TEST_CASE("dashed line reconnects") {
  BinaryRaster img(90, 20);
  dashed_line(img, 5, 8);
  REQUIRE(testing::count_components(img) == 5);
  BinaryRaster out = postprocess_mask(img, fixture_params());
  CHECK(testing::count_components(out) == 1);
}

TEST_CASE("parallel dashed lines 20 px apart stay apart") {
  BinaryRaster img(90, 50);
  dashed_line(img, 5, 10);
  dashed_line(img, 5, 33);  // 20 px of background between the lines
  BinaryRaster out = postprocess_mask(img, fixture_params(1));
  CHECK(testing::count_components(out) == 2);
  BinaryRaster thick = postprocess_mask(img, fixture_params(3));
  CHECK(testing::count_components(thick) == 2);
}

TEST_CASE("solid line stays one component") {
  BinaryRaster img(60, 10);
  testing::fill_rect(img, 5, 4, 50, 3);
  CHECK(testing::count_components(postprocess_mask(img, {})) == 1);
}

TEST_CASE("epsilon extremes") {
  std::mt19937_64 rng(2);
  BinaryRaster img = testing::random_binary(rng, 50, 40, 0.08);
  PostprocessParams p;
  p.epsilon = 0.0;
  PostprocessResult r = postprocess(img, p);
  CHECK(r.mask == img);
  for (const auto& s : r.subsets) CHECK(s.members.empty());

  p.epsilon = 1.0;
  r = postprocess(img, p);
  for (const auto& s : r.subsets) CHECK(s.members.size() == r.components.size());
}

TEST_CASE("monotone and never adds components") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    BinaryRaster img = testing::random_binary(rng, 60, 45, 0.02 + 0.1 * (trial % 5));
    PostprocessParams p;
    p.kernel_length = 3 + 2 * static_cast<int>(rng() % 10);
    p.kernel_thickness = 1 + static_cast<int>(rng() % 3);
    BinaryRaster out = postprocess_mask(img, p);
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (img.pixels()[i]) REQUIRE(out.pixels()[i]);
    }
    CHECK(testing::count_components(out) <= testing::count_components(img));
  }
}

TEST_CASE("quarter turn consistency") {
  // N divisible by 4 maps the probe grid onto itself under a quarter turn.
  BinaryRaster img(100, 60);
  dashed_line(img, 5, 10);
  for (int k = 0; k < 4; ++k) testing::fill_rect(img, 10 + 12 * k, 30 + 5 * k, 8, 2);
  // Diagonal stroke. Exactly isotropic blobs are left out: their theta is a
  // fixed convention and does not turn with the image.
  for (int i = 0; i < 8; ++i) testing::fill_rect(img, 80 + i, 30 + i, 2, 1);
  for (int n : {4, 8, 12}) {
    PostprocessParams p;
    p.n_subsets = n;
    p.kernel_length = 9;
    p.kernel_thickness = 3;
    BinaryRaster a = testing::rotate90(postprocess_mask(img, p));
    BinaryRaster b = postprocess_mask(testing::rotate90(img), p);
    CHECK(a == b);
  }
}

TEST_CASE("subset bookkeeping") {
  BinaryRaster img(90, 20);
  dashed_line(img, 5, 8);
  PostprocessResult r = postprocess(img, fixture_params());
  REQUIRE(r.subsets.size() == 10);
  for (const auto& s : r.subsets) {
    CHECK(s.v.x == probe_vector(s.j, 10).x);
    CHECK(std::abs(s.v.x * s.kernel_direction.x + s.v.y * s.kernel_direction.y) < 1e-12);
    for (int id : s.members) {
      const auto& fc = r.components[id - 1];
      CHECK(fc.fit.alpha * fc.fit.alpha *
                std::abs(s.v.x * fc.fit.theta.x + s.v.y * fc.fit.theta.y) <
            0.2);
    }
  }
  // j = 5 probes (0, 1); every horizontal dash is a member.
  CHECK(r.subsets[4].members.size() == 5);
}
