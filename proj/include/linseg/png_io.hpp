#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "linseg/raster.hpp"

namespace linseg {

using Bytes = std::vector<std::uint8_t>;

// Page images: 8-bit grayscale PNG. Pixels >= 128 are foreground.
BinaryRaster load_binary(const std::filesystem::path& path);
BinaryRaster decode_binary_png(std::span<const std::uint8_t> png);
// Foreground is written as 255, background as 0.
void write_binary(const BinaryRaster& img, const std::filesystem::path& path);
Bytes encode_binary_png(const BinaryRaster& img);

GrayRaster load_gray(const std::filesystem::path& path);
GrayRaster decode_gray_png(std::span<const std::uint8_t> png);
void write_gray(const GrayRaster& img, const std::filesystem::path& path);
Bytes encode_gray_png(const GrayRaster& img);

// Label rasters: 16-bit grayscale PNG, 0 = background. Loading also accepts
// 8-bit grayscale files. Writing throws RangeError for ids above 65535.
LabelRaster load_label_raster(const std::filesystem::path& path);
void write_label_raster(const LabelRaster& labels,
                        const std::filesystem::path& path);
Bytes encode_label_png(const LabelRaster& labels);
LabelRaster decode_label_png(std::span<const std::uint8_t> png);

void write_rgb(const RgbRaster& img, const std::filesystem::path& path);
Bytes encode_rgb_png(const RgbRaster& img);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

}  // namespace linseg
