#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "linseg/raster.hpp"

namespace linseg {

struct WindowSpec {
  int window = 320;
  int core = 100;

  // 0 < core <= window and window - core even; throws ContractError.
  void validate() const;
  int margin() const { return (window - core) / 2; }
};

using ProbabilityRaster = Raster<float>;
using PredictorOutput = std::variant<BinaryRaster, ProbabilityRaster>;

// Position of a prediction window's top-left corner in page coordinates.
// Negative or out-of-page positions address padding.
struct WindowOrigin {
  int x = 0;
  int y = 0;
};

// Maps a window x window binary patch to a mask of the same size. Boolean
// masks are used as is; probabilities are thresholded by the harness.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictorOutput predict(const BinaryRaster& patch, WindowOrigin origin) const = 0;
  // False when predict() must not be called from several threads at once.
  virtual bool concurrent() const { return true; }
};

// Returns its input.
class IdentityPredictor final : public Predictor {
 public:
  PredictorOutput predict(const BinaryRaster& patch, WindowOrigin) const override;
};

// Returns the ground-truth line mask under the queried window (background
// outside the page).
class ReplayPredictor final : public Predictor {
 public:
  explicit ReplayPredictor(BinaryRaster truth) : truth_(std::move(truth)) {}
  PredictorOutput predict(const BinaryRaster& patch, WindowOrigin origin) const override;

 private:
  BinaryRaster truth_;
};

struct StitchOptions {
  double threshold = 0.5;  // probability >= threshold is foreground
  int threads = 0;         // 0 = hardware concurrency
};

// Crop of `src` at (x0, y0) with the given size; pixels outside `src` are
// background.
BinaryRaster crop_padded(const BinaryRaster& src, int x0, int y0, int width, int height);

// Sliding-window prediction. The page is padded by spec.margin() background
// pixels on every side and on the right/bottom up to a multiple of
// spec.core; windows step by spec.core and only each window's central
// core x core block is written. Every page pixel is written exactly once.
BinaryRaster stitch_predict(const BinaryRaster& page, const Predictor& predictor,
                            const WindowSpec& spec, const StitchOptions& options = {});

// Window origins visited by stitch_predict, in raster order.
std::vector<WindowOrigin> window_origins(int page_width, int page_height, const WindowSpec& spec);

// Each 8-connected blob of the mask becomes one line id.
LabelRaster masks_to_lines(const BinaryRaster& mask);

struct PatchEntry {
  std::size_t index = 0;
  int x = 0;  // offset in the (possibly padded) page
  int y = 0;
  std::uint64_t seed = 0;  // per-patch seed the offset was drawn from
};

// Training patches described by their offsets; pixels are cut on demand so
// tens of thousands of patches do not have to be held in memory.
struct PatchSet {
  std::string source;
  int window = 320;
  int page_width = 0;   // after padding
  int page_height = 0;
  std::uint64_t seed = 0;
  std::vector<PatchEntry> entries;
};

struct PatchPair {
  BinaryRaster image;
  BinaryRaster label;  // line mask (label id > 0)
};

// Draws `count` uniformly random window-sized offsets. Pages smaller than
// the window are zero-padded on the right/bottom first. Each entry's seed
// alone reproduces its offset.
PatchSet sample_patches(const BinaryRaster& page, const LabelRaster& labels, int count,
                        int window, std::uint64_t seed, std::string source = {});

PatchPair extract_patch(const BinaryRaster& page, const LabelRaster& labels,
                        const PatchSet& set, const PatchEntry& entry);

std::vector<PatchPair> materialize(const BinaryRaster& page, const LabelRaster& labels,
                                   const PatchSet& set);

// Offset drawn from a per-patch seed.
PatchEntry draw_patch_offset(std::uint64_t patch_seed, std::size_t index, int page_width,
                             int page_height, int window);

// SplitMix64 step used to derive per-patch seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace linseg
