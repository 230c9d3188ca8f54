#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "linseg/components.hpp"
#include "linseg/raster.hpp"

namespace testing {

inline void fill_rect(linseg::BinaryRaster& img, int x0, int y0, int w, int h) {
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) img.set(x, y);
  }
}

inline void fill_rect(linseg::LabelRaster& img, int x0, int y0, int w, int h, std::uint32_t id) {
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) img(x, y) = id;
  }
}

inline std::vector<std::uint8_t> bits(const linseg::BinaryRaster& img) {
  return {img.pixels().begin(), img.pixels().end()};
}

// (x, y) -> (h - 1 - y, x): quarter turn in image coordinates.
template <typename R>
R rotate90(const R& img) {
  R out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out(img.height() - 1 - y, x) = img(x, y);
  }
  return out;
}

inline linseg::BinaryRaster random_binary(std::mt19937_64& rng, int w, int h, double density) {
  linseg::BinaryRaster img(w, h);
  std::bernoulli_distribution on(density);
  for (auto& p : img.pixels()) p = on(rng) ? 1 : 0;
  return img;
}

inline std::size_t count_components(const linseg::BinaryRaster& img) {
  return linseg::connected_components(img).size();
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("linseg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
