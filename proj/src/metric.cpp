#include "linseg/metric.hpp"

#include <algorithm>
#include <cassert>

namespace linseg {
namespace {

std::size_t intersection_size(const ComponentSet& a, const ComponentSet& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

// Sums in ascending order so the result does not depend on line numbering.
double order_free_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum;
}

void require_nonempty(const ComponentSet& g) {
  if (g.empty()) throw ContractError("ground-truth line without components");
}

}  // namespace

bool Fraction::equals(const Fraction& other) const {
  const Fraction a = den == 0 ? Fraction{0, 1} : *this;
  const Fraction b = other.den == 0 ? Fraction{0, 1} : other;
  return a.num * b.den == b.num * a.den;
}

std::string to_string(SingletonPolicy p) {
  return p == SingletonPolicy::exclude ? "exclude" : "beginning_of_line";
}

std::string to_string(Averaging a) { return a == Averaging::micro ? "micro" : "macro"; }

SingletonPolicy parse_singleton_policy(const std::string& s) {
  if (s == "beginning_of_line") return SingletonPolicy::beginning_of_line;
  if (s == "exclude") return SingletonPolicy::exclude;
  throw ContractError("unknown singleton policy '" + s + "'");
}

Averaging parse_averaging(const std::string& s) {
  if (s == "macro") return Averaging::macro;
  if (s == "micro") return Averaging::micro;
  throw ContractError("unknown averaging mode '" + s + "'");
}

std::map<int, std::optional<std::uint32_t>> assign_components(
    const std::vector<Component>& components, const LabelRaster& masks) {
  std::map<int, std::optional<std::uint32_t>> out;
  std::map<std::uint32_t, std::size_t> votes;
  for (const Component& c : components) {
    votes.clear();
    for (const Pixel& p : c.pixels) {
      if (!masks.contains(p.x, p.y)) {
        throw ContractError("component pixel outside the mask raster; dimensions differ");
      }
      const std::uint32_t label = masks(p.x, p.y);
      if (label != 0) ++votes[label];
    }
    std::optional<std::uint32_t> best;
    std::size_t best_votes = 0;
    // Ascending label order: strict '>' keeps the smaller label on ties.
    for (const auto& [label, n] : votes) {
      if (n > best_votes) {
        best_votes = n;
        best = label;
      }
    }
    out[c.id] = best;
  }
  return out;
}

Fraction line_recall(const ComponentSet& g, std::span<const ComponentSet> extracted) {
  require_nonempty(g);
  if (g.size() == 1) {
    for (const ComponentSet& e : extracted) {
      if (e.contains(*g.begin())) return {1, 1};
    }
    return {0, 1};
  }
  Fraction r{0, static_cast<std::int64_t>(g.size()) - 1};
  for (const ComponentSet& e : extracted) {
    const auto common = static_cast<std::int64_t>(intersection_size(e, g));
    if (common > 0) r.num += common - 1;
  }
  return r;
}

Fraction line_precision(const ComponentSet& g, std::span<const ComponentSet> extracted) {
  require_nonempty(g);
  if (g.size() == 1) {
    for (const ComponentSet& e : extracted) {
      if (e.contains(*g.begin())) return {1, static_cast<std::int64_t>(e.size())};
    }
    return {0, 0};
  }
  Fraction p{0, 0};
  for (const ComponentSet& e : extracted) {
    const auto common = static_cast<std::int64_t>(intersection_size(e, g));
    if (common == 0) continue;
    p.num += common - 1;
    p.den += static_cast<std::int64_t>(e.size()) - 1;
  }
  assert(p.num <= p.den);
  return p;
}

LineSets build_line_sets(const std::vector<Component>& components, const LabelRaster& gt_masks,
                         const LabelRaster& extracted_masks, const MetricConfig& cfg) {
  if (!gt_masks.same_shape(extracted_masks)) {
    throw ContractError("ground-truth and extracted label rasters differ in size");
  }
  const auto gt = assign_components(components, gt_masks);
  const auto ex = assign_components(components, extracted_masks);
  LineSets sets;
  for (const Component& c : components) {
    const auto& g = gt.at(c.id);
    const auto& e = ex.at(c.id);
    if (g) sets.ground_truth[*g].insert(c.id);
    if (!g && !cfg.count_unassigned_in_ei) continue;
    if (e) {
      sets.extracted[*e].insert(c.id);
    } else if (g) {
      sets.unassigned.insert(c.id);
    }
  }
  return sets;
}

double f_measure(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

EvalReport score_lines(const LineSets& sets, const MetricConfig& cfg) {
  if (sets.ground_truth.empty()) {
    throw ContractError("ground truth contains no lines with assigned components");
  }
  std::vector<ComponentSet> extracted;
  std::vector<std::uint32_t> extracted_ids;
  for (const auto& [id, e] : sets.extracted) {
    extracted_ids.push_back(id);
    extracted.push_back(e);
  }

  EvalReport report;
  report.averaging = cfg.averaging;
  report.config = cfg;
  report.unassigned_components = sets.unassigned.size();

  std::vector<double> line_r, line_p;
  Fraction micro_r, micro_p;
  std::size_t counted = 0;
  for (const auto& [line_id, g] : sets.ground_truth) {
    LineScore s;
    s.line_id = line_id;
    s.gt_size = g.size();
    s.recall = line_recall(g, extracted);
    s.precision = line_precision(g, extracted);
    s.f_measure = f_measure(s.precision.value(), s.recall.value());
    for (std::size_t i = 0; i < extracted.size(); ++i) {
      const std::size_t common = intersection_size(extracted[i], g);
      if (common > 0) s.intersecting_lines.push_back({extracted_ids[i], common, extracted[i].size()});
    }
    s.excluded = g.size() == 1 && cfg.singleton_policy == SingletonPolicy::exclude;
    if (!s.excluded) {
      ++counted;
      line_r.push_back(s.recall.value());
      line_p.push_back(s.precision.value());
      micro_r.num += s.recall.num;
      micro_r.den += s.recall.den;
      micro_p.num += s.precision.num;
      micro_p.den += s.precision.den;
    }
    report.per_line.push_back(std::move(s));
  }

  if (counted > 0) {
    report.macro.recall = order_free_sum(line_r) / static_cast<double>(counted);
    report.macro.precision = order_free_sum(line_p) / static_cast<double>(counted);
  }
  report.macro.f_measure = f_measure(report.macro.precision, report.macro.recall);
  report.micro.recall = micro_r.value();
  report.micro.precision = micro_p.value();
  report.micro.f_measure = f_measure(report.micro.precision, report.micro.recall);
  return report;
}

EvalReport evaluate(const std::vector<Component>& page_components, const LabelRaster& gt_masks,
                    const LabelRaster& extracted_masks, const MetricConfig& cfg) {
  return score_lines(build_line_sets(page_components, gt_masks, extracted_masks, cfg), cfg);
}

EvalReport evaluate(const BinaryRaster& page, const LabelRaster& gt_masks,
                    const LabelRaster& extracted_masks, const MetricConfig& cfg) {
  if (!page.same_shape(gt_masks) || !page.same_shape(extracted_masks)) {
    throw ContractError("page and label rasters differ in size");
  }
  return evaluate(connected_components(page, cfg.connectivity), gt_masks, extracted_masks, cfg);
}

}  // namespace linseg
