#include "linseg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "linseg/binarize.hpp"
#include "linseg/config.hpp"
#include "linseg/png_io.hpp"
#include "linseg/report.hpp"
#include "linseg/subprocess_predictor.hpp"
#include "linseg/synth.hpp"

namespace linseg {
namespace {

namespace fs = std::filesystem;

void write_json(const nlohmann::json& j, const fs::path& path) {
  const std::string text = j.dump(2) + "\n";
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

nlohmann::json read_json(const fs::path& path) {
  const Bytes bytes = read_file(path);
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// Config layering: defaults, then --config, then explicitly given flags.
class ConfigOptions {
 public:
  void attach(CLI::App* app) {
    app->add_option("--config", config_path_, "flat key = value config file");
  }

  template <typename T>
  void flag(CLI::App* app, const std::string& name, const std::string& key, T& storage,
            const std::string& help) {
    CLI::Option* opt = app->add_option(name, storage, help);
    overrides_.push_back([opt, key, &storage](ToolConfig& cfg) {
      if (opt->count() == 0) return;
      std::ostringstream s;
      s.precision(17);
      s << storage;
      apply_config_value(cfg, key, s.str());
    });
  }

  ToolConfig resolve() const {
    ToolConfig cfg = config_path_.empty() ? ToolConfig{} : load_config(config_path_);
    for (const auto& apply : overrides_) apply(cfg);
    cfg.validate();
    return cfg;
  }

 private:
  std::string config_path_;
  std::vector<std::function<void(ToolConfig&)>> overrides_;
};

struct ErrorLine {
  const char* kind;
  std::string message;
};

int report_error(std::ostream& err, const ErrorLine& e, int status) {
  err << nlohmann::json{{"error", e.kind}, {"message", e.message}}.dump() << "\n";
  return status;
}

SynthPage synth_from_spec(const nlohmann::json& j, std::uint64_t seed) {
  std::vector<LineSpec> specs;
  for (const auto& l : j.at("lines")) {
    LineSpec s;
    s.kind = parse_line_kind(l.value("kind", std::string("straight")));
    s.angle_deg = l.value("angle_deg", 0.0);
    s.amplitude = l.value("amplitude", 0.0);
    s.period = l.value("period", 0.0);
    const auto& start = l.at("start");
    s.start = {start.at(0).get<double>(), start.at(1).get<double>()};
    s.length = l.at("length").get<double>();
    s.segment_length = l.value("segment_length", s.segment_length);
    s.gap = l.value("gap", s.gap);
    s.stroke_thickness = l.value("stroke_thickness", s.stroke_thickness);
    s.mask_margin = l.value("mask_margin", s.mask_margin);
    s.jitter = l.value("jitter", s.jitter);
    specs.push_back(s);
  }
  return generate(specs, j.at("width").get<int>(), j.at("height").get<int>(), seed);
}

std::unique_ptr<Predictor> make_predictor(const std::string& spec, bool streaming) {
  if (spec == "identity") return std::make_unique<IdentityPredictor>();
  if (spec.rfind("cmd:", 0) == 0) {
    return std::make_unique<SubprocessPredictor>(
        spec.substr(4), streaming ? SubprocessMode::streaming : SubprocessMode::per_patch);
  }
  throw ContractError("predictor must be 'identity' or 'cmd:<command>', got '" + spec + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-line mask post-processing, evaluation and sliding-window prediction",
               "linseg"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print tool and schema versions");

  std::function<void()> action;
  auto req = [](CLI::Option* o) { return o->required(); };

  // binarize
  std::string bin_in, bin_out, bin_method = "otsu";
  SauvolaMethod sauvola;
  {
    CLI::App* cmd = app.add_subcommand("binarize", "threshold and invert a grayscale page");
    req(cmd->add_option("--in", bin_in, "8-bit grayscale page"));
    req(cmd->add_option("--out", bin_out, "binary page (ink = 255)"));
    cmd->add_option("--method", bin_method, "otsu | sauvola")
        ->check(CLI::IsMember({"otsu", "sauvola"}));
    cmd->add_option("--sauvola-window", sauvola.window, "Sauvola window side")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--k", sauvola.k, "Sauvola k");
    cmd->callback([&] {
      action = [&] {
        const GrayRaster gray = load_gray(bin_in);
        const BinarizeMethod method =
            bin_method == "otsu" ? BinarizeMethod{OtsuMethod{}} : BinarizeMethod{sauvola};
        write_binary(binarize(gray, method), bin_out);
      };
    });
  }

  // patches
  ConfigOptions patch_cfg;
  std::string patch_page, patch_labels, patch_out;
  int patch_count = 0;
  std::optional<int> patch_window;
  std::uint64_t patch_seed = 0;
  {
    CLI::App* cmd = app.add_subcommand("patches", "sample random training patches");
    patch_cfg.attach(cmd);
    req(cmd->add_option("--page", patch_page, "binary page"));
    req(cmd->add_option("--labels", patch_labels, "line label raster"));
    req(cmd->add_option("--count", patch_count, "number of patches"));
    cmd->add_option("--window", patch_window, "patch side (default: config window)")
        ->check(CLI::PositiveNumber);
    patch_cfg.flag(cmd, "--seed", "seed", patch_seed, "sampling seed");
    req(cmd->add_option("--out", patch_out, "output directory"));
    cmd->callback([&] {
      action = [&] {
        const ToolConfig cfg = patch_cfg.resolve();
        const BinaryRaster page = load_binary(patch_page);
        const LabelRaster labels = load_label_raster(patch_labels);
        const PatchSet set = sample_patches(page, labels, patch_count,
                                            patch_window.value_or(cfg.window.window),
                                            cfg.seed, fs::path(patch_page).filename().string());
        std::error_code ec;
        fs::create_directories(patch_out, ec);
        if (ec) throw IoError("cannot create '" + patch_out + "': " + ec.message());
        char name[64];
        for (const PatchEntry& e : set.entries) {
          const PatchPair pair = extract_patch(page, labels, set, e);
          std::snprintf(name, sizeof name, "patch_%06zu_image.png", e.index);
          write_binary(pair.image, fs::path(patch_out) / name);
          std::snprintf(name, sizeof name, "patch_%06zu_label.png", e.index);
          write_binary(pair.label, fs::path(patch_out) / name);
        }
        write_json(manifest_json(set, cfg), fs::path(patch_out) / "manifest.json");
      };
    });
  }

  // predict
  ConfigOptions pred_cfg;
  std::string pred_page, pred_spec, pred_out;
  int pred_window = 320, pred_core = 100;
  double pred_threshold = 0.5;
  bool pred_streaming = false;
  {
    CLI::App* cmd = app.add_subcommand("predict", "sliding-window prediction with core stitching");
    pred_cfg.attach(cmd);
    req(cmd->add_option("--page", pred_page, "binary page"));
    req(cmd->add_option("--predictor", pred_spec, "identity | cmd:<command>"));
    cmd->add_flag("--streaming", pred_streaming,
                  "keep one predictor process; length-prefixed PNG frames");
    pred_cfg.flag(cmd, "--window", "window", pred_window, "window side");
    pred_cfg.flag(cmd, "--core", "core", pred_core, "retained core side");
    pred_cfg.flag(cmd, "--threshold", "threshold", pred_threshold, "probability threshold");
    req(cmd->add_option("--out", pred_out, "predicted mask"));
    cmd->callback([&] {
      action = [&] {
        const ToolConfig cfg = pred_cfg.resolve();
        const BinaryRaster page = load_binary(pred_page);
        const auto predictor = make_predictor(pred_spec, pred_streaming);
        StitchOptions opts;
        opts.threshold = cfg.threshold;
        write_binary(stitch_predict(page, *predictor, cfg.window, opts), pred_out);
      };
    });
  }

  // postprocess
  ConfigOptions pp_cfg;
  std::string pp_in, pp_out, pp_dump;
  int pp_n = 10, pp_len = 21, pp_thick = 3;
  double pp_eps = 0.2;
  {
    CLI::App* cmd = app.add_subcommand("postprocess", "reconnect broken line masks");
    pp_cfg.attach(cmd);
    req(cmd->add_option("--in", pp_in, "predicted mask"));
    req(cmd->add_option("--out", pp_out, "post-processed mask"));
    pp_cfg.flag(cmd, "--n", "n_subsets", pp_n, "number of orientation subsets");
    pp_cfg.flag(cmd, "--epsilon", "epsilon", pp_eps, "subset threshold");
    pp_cfg.flag(cmd, "--kernel-length", "kernel_length", pp_len, "kernel length (px)");
    pp_cfg.flag(cmd, "--kernel-thickness", "kernel_thickness", pp_thick, "kernel thickness (px)");
    cmd->add_option("--dump-ellipses", pp_dump, "write fitted ellipses as JSON");
    cmd->callback([&] {
      action = [&] {
        const ToolConfig cfg = pp_cfg.resolve();
        const PostprocessResult result = postprocess(load_binary(pp_in), cfg.postprocess);
        write_binary(result.mask, pp_out);
        if (!pp_dump.empty()) write_json(ellipses_json(result, cfg), pp_dump);
      };
    });
  }

  // lines
  std::string lines_in, lines_out;
  {
    CLI::App* cmd = app.add_subcommand("lines", "label each connected mask blob as a line");
    req(cmd->add_option("--in", lines_in, "line mask"));
    req(cmd->add_option("--out", lines_out, "16-bit label raster"));
    cmd->callback([&] {
      action = [&] {
        const LabelRaster labels = masks_to_lines(load_binary(lines_in));
        write_label_raster(labels, lines_out);
        out << "lines: " << labels.max_label() << "\n";
      };
    });
  }

  // evaluate
  ConfigOptions ev_cfg;
  std::string ev_gt, ev_pred, ev_page, ev_report, ev_avg = "macro", ev_single = "beginning_of_line";
  int ev_conn = 8;
  {
    CLI::App* cmd = app.add_subcommand("evaluate", "connectivity-component line accuracy");
    ev_cfg.attach(cmd);
    req(cmd->add_option("--gt", ev_gt, "ground-truth label raster"));
    req(cmd->add_option("--pred", ev_pred, "extracted label raster"));
    req(cmd->add_option("--page", ev_page, "binary page"));
    ev_cfg.flag(cmd, "--averaging", "averaging", ev_avg, "macro | micro");
    ev_cfg.flag(cmd, "--singleton-policy", "singleton_policy", ev_single,
                "beginning_of_line | exclude");
    ev_cfg.flag(cmd, "--connectivity", "connectivity", ev_conn, "4 | 8");
    cmd->add_option("--report", ev_report, "report.json");
    cmd->callback([&] {
      action = [&] {
        const ToolConfig cfg = ev_cfg.resolve();
        const EvalReport report = evaluate(load_binary(ev_page), load_label_raster(ev_gt),
                                           load_label_raster(ev_pred), cfg.metric);
        const nlohmann::json j = report_json(report, cfg);
        if (!ev_report.empty()) write_json(j, ev_report);
        out << j["aggregate"].dump() << "\n";
      };
    });
  }

  // synth
  std::string synth_spec, synth_page, synth_gt;
  std::uint64_t synth_seed = 0;
  int synth_w = 800, synth_h = 600;
  bool synth_random = false;
  {
    CLI::App* cmd = app.add_subcommand("synth", "generate a synthetic dashed-line page");
    auto* spec_opt = cmd->add_option("--spec", synth_spec, "spec.json with width/height/lines");
    auto* random_opt = cmd->add_flag("--random", synth_random, "random mixed lines");
    spec_opt->excludes(random_opt);
    cmd->add_option("--width", synth_w, "page width for --random")->check(CLI::PositiveNumber);
    cmd->add_option("--height", synth_h, "page height for --random")->check(CLI::PositiveNumber);
    req(cmd->add_option("--out-page", synth_page, "binary page"));
    req(cmd->add_option("--out-gt", synth_gt, "ground-truth label raster"));
    cmd->add_option("--seed", synth_seed, "seed");
    cmd->callback([&] {
      action = [&] {
        SynthPage page;
        if (synth_random) {
          page = generate(random_line_specs(synth_seed, synth_w, synth_h), synth_w, synth_h,
                          synth_seed);
        } else if (!synth_spec.empty()) {
          try {
            page = synth_from_spec(read_json(synth_spec), synth_seed);
          } catch (const nlohmann::json::exception& e) {
            throw ContractError(synth_spec + ": " + e.what());
          }
        } else {
          throw ContractError("synth needs --spec or --random");
        }
        write_binary(page.page, synth_page);
        write_label_raster(page.gt_masks, synth_gt);
      };
    });
  }

  // overlay
  std::string ov_page, ov_labels, ov_out;
  {
    CLI::App* cmd = app.add_subcommand("overlay", "colour line labels over the page");
    req(cmd->add_option("--page", ov_page, "8-bit grayscale page"));
    req(cmd->add_option("--labels", ov_labels, "label raster"));
    req(cmd->add_option("--out", ov_out, "RGB PNG"));
    cmd->callback([&] {
      action = [&] { write_rgb(overlay(load_gray(ov_page), load_label_raster(ov_labels)), ov_out); };
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, {"usage", e.what()}, kExitUsage);
  }

  if (show_version) {
    out << "linseg " << kToolVersion << " (report schema " << kReportSchemaVersion << ")\n";
    return kExitOk;
  }
  if (!action) {
    out << app.help();
    return kExitUsage;
  }

  try {
    action();
  } catch (const IoError& e) {
    return report_error(err, {"io", e.what()}, kExitIo);
  } catch (const FormatError& e) {
    return report_error(err, {"format", e.what()}, kExitIo);
  } catch (const ContractError& e) {
    return report_error(err, {"usage", e.what()}, kExitUsage);
  } catch (const RangeError& e) {
    return report_error(err, {"range", e.what()}, kExitUsage);
  } catch (const GenerationError& e) {
    return report_error(err, {"usage", e.what()}, kExitUsage);
  } catch (const std::exception& e) {
    return report_error(err, {"internal", e.what()}, kExitIo);
  }
  return kExitOk;
}

}  // namespace linseg
