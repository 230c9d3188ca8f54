#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "json.hpp"

#include "linseg/metric.hpp"
#include "linseg/pipeline.hpp"
#include "linseg/postprocess.hpp"

namespace linseg {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Shared settings of every subcommand. Defaults: N = 10, epsilon = 0.2,
// 320/100 windows, macro averaging.
struct ToolConfig {
  PostprocessParams postprocess;
  WindowSpec window;
  MetricConfig metric;
  double threshold = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Applies a flat "key = value" document ('#' starts a comment). Keys:
//   n_subsets epsilon kernel_length kernel_thickness window core
//   averaging singleton_policy connectivity count_unassigned_in_ei
//   threshold seed
// Unknown keys and malformed values throw ContractError naming the line.
void apply_config_text(ToolConfig& cfg, std::string_view text, std::string_view origin = "config");
// Sets one key; same keys and errors as apply_config_text.
void apply_config_value(ToolConfig& cfg, std::string_view key, std::string_view value);

ToolConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ToolConfig& cfg);

}  // namespace linseg
