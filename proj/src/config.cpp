#include "linseg/config.hpp"

#include <charconv>
#include <sstream>
#include <string>

#include "linseg/png_io.hpp"

namespace linseg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ContractError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ContractError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

}  // namespace

void ToolConfig::validate() const {
  postprocess.validate();
  window.validate();
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ContractError("threshold must lie in [0, 1]");
  }
}

void apply_config_value(ToolConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "n_subsets") {
    cfg.postprocess.n_subsets = parse_number<int>(key, value);
  } else if (key == "epsilon") {
    cfg.postprocess.epsilon = parse_number<double>(key, value);
  } else if (key == "kernel_length") {
    cfg.postprocess.kernel_length = parse_number<int>(key, value);
  } else if (key == "kernel_thickness") {
    cfg.postprocess.kernel_thickness = parse_number<int>(key, value);
  } else if (key == "window") {
    cfg.window.window = parse_number<int>(key, value);
  } else if (key == "core") {
    cfg.window.core = parse_number<int>(key, value);
  } else if (key == "averaging") {
    cfg.metric.averaging = parse_averaging(std::string(value));
  } else if (key == "singleton_policy") {
    cfg.metric.singleton_policy = parse_singleton_policy(std::string(value));
  } else if (key == "connectivity") {
    const int c = parse_number<int>(key, value);
    if (c != 4 && c != 8) throw ContractError("connectivity must be 4 or 8");
    cfg.metric.connectivity = c == 4 ? Connectivity::four : Connectivity::eight;
  } else if (key == "count_unassigned_in_ei") {
    cfg.metric.count_unassigned_in_ei = parse_bool(key, value);
  } else if (key == "threshold") {
    cfg.threshold = parse_number<double>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw ContractError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(ToolConfig& cfg, std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ContractError(where + "expected key = value");
    try {
      apply_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ContractError& e) {
      throw ContractError(where + e.what());
    }
  }
  cfg.validate();
}

ToolConfig load_config(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  ToolConfig cfg;
  apply_config_text(cfg, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                    path.string());
  return cfg;
}

nlohmann::json to_json(const ToolConfig& cfg) {
  return {
      {"n_subsets", cfg.postprocess.n_subsets},
      {"epsilon", cfg.postprocess.epsilon},
      {"kernel_length", cfg.postprocess.kernel_length},
      {"kernel_thickness", cfg.postprocess.kernel_thickness},
      {"window", cfg.window.window},
      {"core", cfg.window.core},
      {"averaging", to_string(cfg.metric.averaging)},
      {"singleton_policy", to_string(cfg.metric.singleton_policy)},
      {"connectivity", static_cast<int>(cfg.metric.connectivity)},
      {"count_unassigned_in_ei", cfg.metric.count_unassigned_in_ei},
      {"threshold", cfg.threshold},
      {"seed", cfg.seed},
  };
}

}  // namespace linseg
