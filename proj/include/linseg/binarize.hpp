#pragma once

#include <variant>

#include "linseg/raster.hpp"

namespace linseg {

struct OtsuMethod {};

struct SauvolaMethod {
  int window = 31;
  double k = 0.2;
  double dynamic_range = 128.0;
};

using BinarizeMethod = std::variant<OtsuMethod, SauvolaMethod>;

// Global Otsu threshold: the gray level t maximizing between-class variance
// when pixels <= t form one class. Returns -1 for single-valued images.
int otsu_threshold(const GrayRaster& gray);

// Thresholds and inverts a grayscale page: dark ink becomes foreground.
// Constant images yield an all-background raster.
BinaryRaster binarize(const GrayRaster& gray,
                      const BinarizeMethod& method = OtsuMethod{});

}  // namespace linseg
