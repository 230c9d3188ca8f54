#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "linseg/components.hpp"
#include "oracles/flood_fill.hpp"
#include "support.hpp"

using namespace linseg;

TEST_CASE("raster rejects non-positive dimensions") {
  CHECK_THROWS_AS(BinaryRaster(0, 3), ContractError);
  CHECK_THROWS_AS(BinaryRaster(3, -1), ContractError);
  BinaryRaster ok(3, 2);
  CHECK(ok.size() == 6);
  CHECK(ok.count() == 0);
}

TEST_CASE("binary or and label helpers") {
  BinaryRaster a(4, 1), b(4, 1);
  a.set(0, 0);
  b.set(3, 0);
  a |= b;
  CHECK(a.count() == 2);
  CHECK_THROWS_AS(a |= BinaryRaster(2, 2), ContractError);

  LabelRaster l(3, 1);
  l(0, 0) = 7;
  l(2, 0) = 2;
  CHECK(l.max_label() == 7);
  CHECK(l.label_ids() == std::vector<std::uint32_t>{2, 7});
  CHECK(l.to_mask().count() == 2);
}

TEST_CASE("empty raster has no components") {
  CHECK(connected_components(BinaryRaster(5, 5)).empty());
  CHECK(label_components(BinaryRaster(5, 5)).max_label() == 0);
}

TEST_CASE("diagonal pair depends on connectivity") {
  BinaryRaster img(2, 2);
  img.set(0, 0);
  img.set(1, 1);
  CHECK(connected_components(img, Connectivity::eight).size() == 1);
  CHECK(connected_components(img, Connectivity::four).size() == 2);
}

TEST_CASE("three bars give three disjoint boxes") {
  BinaryRaster img(12, 9);
  testing::fill_rect(img, 1, 1, 10, 1);
  testing::fill_rect(img, 0, 4, 12, 2);
  testing::fill_rect(img, 3, 7, 5, 1);
  auto comps = connected_components(img);
  auto ref = oracle::flood_fill(testing::bits(img), 12, 9, 8);
  REQUIRE(comps.size() == static_cast<std::size_t>(ref.count));
  REQUIRE(comps.size() == 3);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      const BBox& a = comps[i].bbox;
      const BBox& b = comps[j].bbox;
      const bool overlap = a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
      CHECK_FALSE(overlap);
    }
  }
  CHECK(comps[0].bbox == BBox{1, 1, 10, 1});
  CHECK(comps[1].area() == 24);
  CHECK(comps[2].centroid.x == doctest::Approx(5.0));
}

TEST_CASE("labeling matches flood fill on random images") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 40);
    const int h = 1 + static_cast<int>(rng() % 40);
    const double density = 0.2 + 0.6 * (rng() % 100) / 100.0;
    BinaryRaster img = testing::random_binary(rng, w, h, density);
    for (Connectivity conn : {Connectivity::four, Connectivity::eight}) {
      LabelRaster ours = label_components(img, conn);
      auto ref = oracle::flood_fill(testing::bits(img), w, h, static_cast<int>(conn));
      // Both number regions by first pixel in raster order, so ids agree.
      REQUIRE(std::equal(ours.pixels().begin(), ours.pixels().end(), ref.labels.begin(),
                         [](std::uint32_t a, int b) { return static_cast<int>(a) == b; }));
    }
  }
}

TEST_CASE("components partition the foreground") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    BinaryRaster img = testing::random_binary(rng, 30, 25, 0.45);
    for (Connectivity conn : {Connectivity::four, Connectivity::eight}) {
      auto comps = connected_components(img, conn);
      std::size_t total = 0;
      std::set<std::pair<int, int>> seen;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const Component& c = comps[i];
        CHECK(c.id == static_cast<int>(i) + 1);
        REQUIRE_FALSE(c.pixels.empty());
        total += c.area();
        for (const Pixel& p : c.pixels) {
          CHECK(img.test(p.x, p.y));
          CHECK(c.bbox.contains(p));
          CHECK(seen.insert({p.x, p.y}).second);
        }
      }
      CHECK(total == img.count());
    }
    CHECK(connected_components(img, Connectivity::eight).size() <=
          connected_components(img, Connectivity::four).size());
  }
}

TEST_CASE("labeling is deterministic") {
  std::mt19937_64 rng(99);
  BinaryRaster img = testing::random_binary(rng, 64, 48, 0.5);
  CHECK(label_components(img) == label_components(img));
}

TEST_CASE("first pixels ascend in raster order") {
  std::mt19937_64 rng(3);
  BinaryRaster img = testing::random_binary(rng, 40, 40, 0.3);
  auto comps = connected_components(img, Connectivity::four);
  for (std::size_t i = 1; i < comps.size(); ++i) {
    const Pixel a = comps[i - 1].pixels.front();
    const Pixel b = comps[i].pixels.front();
    CHECK((a.y < b.y || (a.y == b.y && a.x < b.x)));
  }
}

TEST_CASE("components from labels and boundary pixels") {
  LabelRaster l(5, 5);
  testing::fill_rect(l, 0, 0, 5, 5, 3);
  l(0, 0) = 1;
  auto comps = components_from_labels(l);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].id == 1);
  CHECK(comps[1].id == 3);
  CHECK(comps[1].area() == 24);

  BinaryRaster sq(7, 7);
  testing::fill_rect(sq, 1, 1, 5, 5);
  auto c = connected_components(sq).front();
  CHECK(boundary_pixels(c).size() == 16);
}
