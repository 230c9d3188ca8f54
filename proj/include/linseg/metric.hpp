#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "linseg/components.hpp"

namespace linseg {

// Exact ratio of connectivity-component counts. A zero denominator means
// nothing was counted; value() is 0 in that case.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 0;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
  // Exact comparison by cross multiplication (0/0 compares as 0).
  bool equals(const Fraction& other) const;
};

using ComponentSet = std::set<int>;

enum class SingletonPolicy { beginning_of_line, exclude };
enum class Averaging { macro, micro };

struct MetricConfig {
  Averaging averaging = Averaging::macro;
  SingletonPolicy singleton_policy = SingletonPolicy::beginning_of_line;
  // Connectivity of the text components extracted from the binary page.
  Connectivity connectivity = Connectivity::eight;
  // When false, components outside every ground-truth mask are left out of
  // every |E_i| as well.
  bool count_unassigned_in_ei = false;
};

std::string to_string(SingletonPolicy p);
std::string to_string(Averaging a);
SingletonPolicy parse_singleton_policy(const std::string& s);
Averaging parse_averaging(const std::string& s);

// Component id -> label of the mask covering most of its pixels. Ties go to
// the smaller label; no overlap maps to nullopt.
std::map<int, std::optional<std::uint32_t>> assign_components(
    const std::vector<Component>& components, const LabelRaster& masks);

// Recall of one ground-truth line G against the extracted lines. Lines that
// do not intersect G are ignored. For |G| >= 2 this is
//   sum_i (|E_i n G| - 1) / (|G| - 1).
// A single-component line is recalled (1/1) iff some E_i contains it.
Fraction line_recall(const ComponentSet& g, std::span<const ComponentSet> extracted);

// Precision of one ground-truth line. For |G| >= 2:
//   sum_i (|E_i n G| - 1) / sum_i (|E_i| - 1),
// which is 0/0 when every intersecting E_i is a single component.
// For |G| = 1 the containing line E contributes one beginning-of-line
// connectivity component out of |E|, so an exact match gives 1/1.
Fraction line_precision(const ComponentSet& g, std::span<const ComponentSet> extracted);

struct LineSets {
  std::map<std::uint32_t, ComponentSet> ground_truth;
  std::map<std::uint32_t, ComponentSet> extracted;
  ComponentSet unassigned;  // in some G but in no extracted line
};

LineSets build_line_sets(const std::vector<Component>& components, const LabelRaster& gt_masks,
                         const LabelRaster& extracted_masks, const MetricConfig& cfg);

struct Intersection {
  std::uint32_t extracted_id = 0;
  std::size_t overlap = 0;  // |E_i n G|
  std::size_t size = 0;     // |E_i|
};

struct LineScore {
  std::uint32_t line_id = 0;
  Fraction recall;
  Fraction precision;
  double f_measure = 0.0;
  std::size_t gt_size = 0;
  std::vector<Intersection> intersecting_lines;
  bool excluded = false;  // singleton line under SingletonPolicy::exclude
};

struct Scores {
  double recall = 0.0;
  double precision = 0.0;
  double f_measure = 0.0;
};

struct EvalReport {
  std::vector<LineScore> per_line;
  Scores macro;
  Scores micro;
  Averaging averaging = Averaging::macro;
  MetricConfig config;
  std::size_t unassigned_components = 0;

  const Scores& aggregate() const { return averaging == Averaging::macro ? macro : micro; }
};

double f_measure(double precision, double recall);

// Scores every ground-truth line. Throws ContractError if there is none.
EvalReport score_lines(const LineSets& sets, const MetricConfig& cfg);

EvalReport evaluate(const std::vector<Component>& page_components, const LabelRaster& gt_masks,
                    const LabelRaster& extracted_masks, const MetricConfig& cfg = {});

// Extracts the page's components with cfg.connectivity, then evaluates.
EvalReport evaluate(const BinaryRaster& page, const LabelRaster& gt_masks,
                    const LabelRaster& extracted_masks, const MetricConfig& cfg = {});

}  // namespace linseg
