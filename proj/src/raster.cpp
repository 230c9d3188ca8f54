#include "linseg/raster.hpp"

#include <algorithm>

namespace linseg {

std::size_t BinaryRaster::count() const {
  return static_cast<std::size_t>(
      std::count_if(pixels().begin(), pixels().end(),
                    [](std::uint8_t v) { return v != 0; }));
}

BinaryRaster& BinaryRaster::operator|=(const BinaryRaster& other) {
  if (!same_shape(other)) {
    throw ContractError("OR of rasters with different dimensions");
  }
  auto dst = pixels();
  auto src = other.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
  return *this;
}

std::uint32_t LabelRaster::max_label() const {
  if (empty()) return 0;
  return *std::max_element(pixels().begin(), pixels().end());
}

std::vector<std::uint32_t> LabelRaster::label_ids() const {
  std::vector<std::uint32_t> ids;
  for (auto v : pixels()) {
    if (v != 0) ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

BinaryRaster LabelRaster::to_mask() const {
  BinaryRaster mask(width(), height());
  auto src = pixels();
  auto dst = mask.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] != 0 ? 1 : 0;
  return mask;
}

}  // namespace linseg
