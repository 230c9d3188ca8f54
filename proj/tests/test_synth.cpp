#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "linseg/ellipse.hpp"
#include "linseg/metric.hpp"
#include "linseg/synth.hpp"

using namespace linseg;

namespace {

LineSpec straight_line(Point2 start, double length) {
  LineSpec s;
  s.start = start;
  s.length = length;
  return s;
}

double axis_angle_deg(Point2 v) {
  double a = std::atan2(v.y, v.x) * 180.0 / M_PI;
  if (a > 90) a -= 180;
  if (a <= -90) a += 180;
  return a;
}

}  // namespace

TEST_CASE("five dashes on one horizontal line") {
  SynthPage p = generate({straight_line({10, 20}, 66)}, 100, 40, 1);
  CHECK(p.dashes.size() == 5);
  CHECK(connected_components(p.page).size() == 5);
  CHECK(p.gt_masks.label_ids() == std::vector<std::uint32_t>{1});
  CHECK(p.page.count() == 5 * 10 * 3);
}

TEST_CASE("lines at 0 and 45 degrees") {
  LineSpec flat = straight_line({10, 15}, 120);
  LineSpec diag;
  diag.kind = LineKind::skewed;
  diag.angle_deg = 45;
  diag.start = {20, 40};
  diag.length = 120;
  SynthPage p = generate({flat, diag}, 160, 140, 3);
  CHECK(p.gt_masks.label_ids() == std::vector<std::uint32_t>{1, 2});

  auto comps = connected_components(p.page);
  auto assigned = assign_components(comps, p.gt_masks);
  for (const Component& c : comps) {
    REQUIRE(assigned.at(c.id).has_value());
    // Every pixel of the component carries the assigned label.
    for (const Pixel& px : c.pixels) CHECK(p.gt_masks(px.x, px.y) == *assigned.at(c.id));
    const std::uint32_t expected = c.centroid.y < 28 ? 1u : 2u;
    CHECK(*assigned.at(c.id) == expected);
  }
  for (std::size_t i = 0; i < p.page.size(); ++i) {
    if (p.page.pixels()[i]) CHECK(p.gt_masks.pixels()[i] != 0);
  }
}

TEST_CASE("curved line dashes follow the tangent") {
  LineSpec c;
  c.kind = LineKind::curved;
  c.amplitude = 15;
  c.period = 200;
  c.start = {20, 60};
  c.length = 200;
  c.segment_length = 12;
  c.gap = 4;
  SynthPage p = generate({c}, 260, 120, 5);
  auto comps = fit_components(connected_components(p.page));
  REQUIRE(comps.size() == p.dashes.size());

  std::vector<double> fitted;
  for (const FittedComponent& fc : comps) {
    // Match the dash whose center is closest to the component centroid.
    const Dash* best = nullptr;
    double best_d = 1e300;
    for (const Dash& d : p.dashes) {
      const double dd = std::hypot(d.center.x - fc.component.centroid.x,
                                   d.center.y - fc.component.centroid.y);
      if (dd < best_d) {
        best_d = dd;
        best = &d;
      }
    }
    REQUIRE(best != nullptr);
    // Reference tangent straight from the sinusoid derivative.
    const double s = best->center.x - c.start.x;
    const double slope = c.amplitude * 2 * M_PI / c.period * std::cos(2 * M_PI * s / c.period);
    // Base direction (1, 0) has normal (0, 1), so y grows with the offset.
    const double tangent = std::atan(slope) * 180.0 / M_PI;
    CHECK(std::abs(axis_angle_deg(fc.fit.theta) - tangent) < 10.0);
    fitted.push_back(axis_angle_deg(fc.fit.theta));
  }
  // Components are in raster order; sort by x to walk the path.
  std::vector<std::pair<double, double>> by_x;
  for (std::size_t i = 0; i < comps.size(); ++i) by_x.push_back({comps[i].component.centroid.x, fitted[i]});
  std::sort(by_x.begin(), by_x.end());
  // The tangent angle falls over the first half period and rises after it.
  for (std::size_t i = 1; i < by_x.size(); ++i) {
    const double mid = (by_x[i].first + by_x[i - 1].first) / 2 - c.start.x;
    if (mid > 15 && mid < 85) CHECK(by_x[i].second <= by_x[i - 1].second + 2.0);
    if (mid > 115 && mid < 185) CHECK(by_x[i].second >= by_x[i - 1].second - 2.0);
  }
}

TEST_CASE("generation errors") {
  CHECK_THROWS_AS(generate({straight_line({50, 2}, 30)}, 100, 100, 1), ContractError);
  CHECK_THROWS_AS(generate({straight_line({80, 50}, 60)}, 100, 100, 1), ContractError);
  CHECK_THROWS_AS(generate({straight_line({10, 50}, 60), straight_line({10, 55}, 60)}, 100, 100, 1),
                  GenerationError);
  LineSpec bad = straight_line({10, 50}, 60);
  bad.kind = LineKind::curved;
  bad.period = 20;
  bad.amplitude = 10;
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("seeded determinism") {
  LineSpec s = straight_line({10, 30}, 150);
  s.jitter = 3;
  SynthPage a = generate({s}, 200, 60, 9);
  SynthPage b = generate({s}, 200, 60, 9);
  CHECK(a.page == b.page);
  CHECK(a.gt_masks == b.gt_masks);
  SynthPage other = generate({s}, 200, 60, 10);
  CHECK_FALSE(other.page == a.page);
}

TEST_CASE("random pages mix every kind and stay disjoint") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto specs = random_line_specs(seed, 600, 500);
    REQUIRE(specs.size() >= 3);
    std::set<LineKind> kinds;
    for (const auto& s : specs) kinds.insert(s.kind);
    CHECK(kinds.size() == 3);
    SynthPage p = generate(specs, 600, 500, seed);
    CHECK(p.gt_masks.label_ids().size() == specs.size());
    CHECK(random_line_specs(seed, 600, 500).size() == specs.size());
  }
}

TEST_CASE("line kind names") {
  CHECK(parse_line_kind("curved") == LineKind::curved);
  CHECK(to_string(LineKind::skewed) == "skewed");
  CHECK_THROWS_AS(parse_line_kind("wavy"), ContractError);
}
