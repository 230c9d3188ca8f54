#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linseg/errors.hpp"

namespace linseg {

// Dense row-major 2D grid. Dimensions are always strictly positive.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw ContractError("raster dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool same_shape(const auto& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  T& operator()(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<T> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Foreground/background page. Stored as 0/1 bytes; 1 = ink (after inversion).
class BinaryRaster : public Raster<std::uint8_t> {
 public:
  using Raster::Raster;

  bool test(int x, int y) const { return (*this)(x, y) != 0; }
  void set(int x, int y, bool on = true) { (*this)(x, y) = on ? 1 : 0; }

  std::size_t count() const;

  // Pixel-wise OR of a same-shaped raster into this one.
  BinaryRaster& operator|=(const BinaryRaster& other);

  friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;
};

// 8-bit grayscale image (0 = black, 255 = white).
class GrayRaster : public Raster<std::uint8_t> {
 public:
  using Raster::Raster;
  friend bool operator==(const GrayRaster&, const GrayRaster&) = default;
};

// Per-pixel line ids; 0 is background.
class LabelRaster : public Raster<std::uint32_t> {
 public:
  using Raster::Raster;

  std::uint32_t max_label() const;
  // Distinct non-zero label ids, ascending.
  std::vector<std::uint32_t> label_ids() const;
  // Foreground mask of every non-zero label.
  BinaryRaster to_mask() const;

  friend bool operator==(const LabelRaster&, const LabelRaster&) = default;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

class RgbRaster : public Raster<Rgb> {
 public:
  using Raster::Raster;
  friend bool operator==(const RgbRaster&, const RgbRaster&) = default;
};

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Inclusive pixel bounding box.
struct BBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  bool contains(Pixel p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  friend bool operator==(const BBox&, const BBox&) = default;
};

}  // namespace linseg
