#include "linseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "linseg/components.hpp"

namespace linseg {

void WindowSpec::validate() const {
  if (core <= 0 || core > window) {
    throw ContractError("window spec requires 0 < core <= window (window=" +
                        std::to_string(window) + ", core=" + std::to_string(core) + ")");
  }
  if ((window - core) % 2 != 0) {
    throw ContractError("window - core must be even (window=" + std::to_string(window) +
                        ", core=" + std::to_string(core) + ")");
  }
}

PredictorOutput IdentityPredictor::predict(const BinaryRaster& patch, WindowOrigin) const {
  return patch;
}

PredictorOutput ReplayPredictor::predict(const BinaryRaster& patch, WindowOrigin origin) const {
  return crop_padded(truth_, origin.x, origin.y, patch.width(), patch.height());
}

BinaryRaster crop_padded(const BinaryRaster& src, int x0, int y0, int width, int height) {
  BinaryRaster out(width, height);
  const int sx0 = std::max(0, x0);
  const int sx1 = std::min(src.width(), x0 + width);
  if (sx0 >= sx1) return out;
  for (int y = 0; y < height; ++y) {
    const int sy = y0 + y;
    if (sy < 0 || sy >= src.height()) continue;
    const auto s = src.row(sy);
    auto d = out.row(y);
    std::copy(s.begin() + sx0, s.begin() + sx1, d.begin() + (sx0 - x0));
  }
  return out;
}

std::vector<WindowOrigin> window_origins(int page_width, int page_height, const WindowSpec& spec) {
  spec.validate();
  const int nx = (page_width + spec.core - 1) / spec.core;
  const int ny = (page_height + spec.core - 1) / spec.core;
  std::vector<WindowOrigin> origins;
  origins.reserve(static_cast<std::size_t>(nx) * ny);
  for (int ky = 0; ky < ny; ++ky) {
    for (int kx = 0; kx < nx; ++kx) {
      origins.push_back({kx * spec.core - spec.margin(), ky * spec.core - spec.margin()});
    }
  }
  return origins;
}

namespace {

BinaryRaster to_mask(PredictorOutput output, int expected, WindowOrigin origin, double threshold) {
  auto check = [&](int w, int h) {
    if (w != expected || h != expected) {
      throw ContractError("predictor returned a " + std::to_string(w) + "x" + std::to_string(h) +
                          " mask for the window at offset (" + std::to_string(origin.x) + ", " +
                          std::to_string(origin.y) + "), expected " + std::to_string(expected) +
                          "x" + std::to_string(expected));
    }
  };
  if (auto* mask = std::get_if<BinaryRaster>(&output)) {
    check(mask->width(), mask->height());
    return std::move(*mask);
  }
  const auto& prob = std::get<ProbabilityRaster>(output);
  check(prob.width(), prob.height());
  BinaryRaster mask(prob.width(), prob.height());
  auto src = prob.pixels();
  auto dst = mask.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= threshold ? 1 : 0;
  return mask;
}

}  // namespace

BinaryRaster stitch_predict(const BinaryRaster& page, const Predictor& predictor,
                            const WindowSpec& spec, const StitchOptions& options) {
  spec.validate();
  const std::vector<WindowOrigin> origins = window_origins(page.width(), page.height(), spec);
  BinaryRaster out(page.width(), page.height());
  const int margin = spec.margin();

  // Cores are disjoint, so windows can be processed in any order and in
  // parallel without synchronizing writes to `out`.
  auto run_window = [&](const WindowOrigin& o) {
    const BinaryRaster patch = crop_padded(page, o.x, o.y, spec.window, spec.window);
    const BinaryRaster mask =
        to_mask(predictor.predict(patch, o), spec.window, o, options.threshold);
    const int px0 = o.x + margin;
    const int py0 = o.y + margin;
    const int x_end = std::min(page.width(), px0 + spec.core);
    const int y_end = std::min(page.height(), py0 + spec.core);
    for (int y = py0; y < y_end; ++y) {
      const auto src = mask.row(y - o.y);
      auto dst = out.row(y);
      std::copy(src.begin() + margin, src.begin() + margin + (x_end - px0), dst.begin() + px0);
    }
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(origins.size()));
  if (!predictor.concurrent() || threads == 1) {
    for (const WindowOrigin& o : origins) run_window(o);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < origins.size(); i = next++) {
          try {
            run_window(origins[i]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = origins.size();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

LabelRaster masks_to_lines(const BinaryRaster& mask) {
  return label_components(mask, Connectivity::eight);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

// Unbiased integer in [0, n) from a standard-specified engine, so offsets are
// identical across standard library implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

}  // namespace

PatchEntry draw_patch_offset(std::uint64_t patch_seed, std::size_t index, int page_width,
                             int page_height, int window) {
  std::mt19937_64 rng(patch_seed);
  PatchEntry e;
  e.index = index;
  e.seed = patch_seed;
  e.x = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(page_width - window) + 1));
  e.y = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(page_height - window) + 1));
  return e;
}

PatchSet sample_patches(const BinaryRaster& page, const LabelRaster& labels, int count,
                        int window, std::uint64_t seed, std::string source) {
  if (count <= 0) throw ContractError("patch count must be positive");
  if (window <= 0) throw ContractError("patch window must be positive");
  if (!page.same_shape(labels)) throw ContractError("page and label raster differ in size");

  PatchSet set;
  set.source = std::move(source);
  set.window = window;
  set.page_width = std::max(page.width(), window);
  set.page_height = std::max(page.height(), window);
  set.seed = seed;
  set.entries.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t patch_seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i)));
    set.entries.push_back(
        draw_patch_offset(patch_seed, static_cast<std::size_t>(i), set.page_width,
                          set.page_height, window));
  }
  return set;
}

PatchPair extract_patch(const BinaryRaster& page, const LabelRaster& labels, const PatchSet& set,
                        const PatchEntry& entry) {
  PatchPair pair{crop_padded(page, entry.x, entry.y, set.window, set.window),
                 BinaryRaster(set.window, set.window)};
  for (int y = 0; y < set.window; ++y) {
    const int sy = entry.y + y;
    if (sy >= labels.height()) break;
    const auto src = labels.row(sy);
    auto dst = pair.label.row(y);
    const int x_end = std::min(set.window, labels.width() - entry.x);
    for (int x = 0; x < x_end; ++x) dst[x] = src[entry.x + x] != 0 ? 1 : 0;
  }
  return pair;
}

std::vector<PatchPair> materialize(const BinaryRaster& page, const LabelRaster& labels,
                                   const PatchSet& set) {
  std::vector<PatchPair> out;
  out.reserve(set.entries.size());
  for (const PatchEntry& e : set.entries) out.push_back(extract_patch(page, labels, set, e));
  return out;
}

}  // namespace linseg
