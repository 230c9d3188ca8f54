#include "linseg/png_io.hpp"

#include <png.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace linseg {
namespace {

// libpng reports errors through a callback that must not return. Throwing
// from it unwinds through libpng's frames (built with unwind tables on every
// platform we target), which avoids setjmp/longjmp across C++ objects.
struct PngFailure {
  std::string message;
};

[[noreturn]] void on_png_error(png_structp, png_const_charp msg) {
  throw PngFailure{msg ? msg : "libpng error"};
}

void on_png_warning(png_structp, png_const_charp) {}

struct ReadCursor {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;
};

void read_from_cursor(png_structp png, png_bytep out, png_size_t n) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->data.size() - cursor->pos < n) {
    png_error(png, "truncated PNG data");
  }
  std::memcpy(out, cursor->data.data() + cursor->pos, n);
  cursor->pos += n;
}

void write_to_vector(png_structp png, png_bytep in, png_size_t n) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + n);
}

void flush_noop(png_structp) {}

// One-channel samples widened to 16 bits; bit_depth is 8 or 16.
struct GraySamples {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> values;
};

GraySamples decode_gray(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw FormatError("not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           on_png_error, on_png_warning);
  if (png == nullptr) throw FormatError("cannot allocate PNG reader");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp& png;
    png_infop& info;
    ~Guard() { png_destroy_read_struct(&png, &info, nullptr); }
  } guard{png, info};

  ReadCursor cursor{bytes, 0};
  GraySamples out;
  try {
    png_set_read_fn(png, &cursor, read_from_cursor);
    png_read_info(png, info);
    const auto color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
      throw FormatError("PNG is not single-channel grayscale");
    }
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16 && std::endian::native == std::endian::little) {
      png_set_swap(png);
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = depth == 16 ? 16 : 8;
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    std::vector<std::uint8_t> buffer(row_bytes * out.height);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);

    out.values.resize(static_cast<std::size_t>(out.width) * out.height);
    if (out.bit_depth == 16) {
      for (int y = 0; y < out.height; ++y) {
        std::memcpy(out.values.data() + static_cast<std::size_t>(y) * out.width,
                    rows[y], static_cast<std::size_t>(out.width) * 2);
      }
    } else {
      for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
          out.values[static_cast<std::size_t>(y) * out.width + x] = rows[y][x];
        }
      }
    }
  } catch (const PngFailure& e) {
    throw FormatError("invalid PNG: " + e.message);
  }
  if (out.width <= 0 || out.height <= 0) throw FormatError("empty PNG image");
  return out;
}

// `row_bytes(y)` must return a pointer to the y-th row in PNG byte layout
// (big-endian for 16-bit samples).
template <typename RowFn>
Bytes encode(int width, int height, int bit_depth, int color_type,
             RowFn&& row_bytes) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            on_png_error, on_png_warning);
  if (png == nullptr) throw FormatError("cannot allocate PNG writer");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp& png;
    png_infop& info;
    ~Guard() { png_destroy_write_struct(&png, &info); }
  } guard{png, info};

  Bytes out;
  try {
    png_set_write_fn(png, &out, write_to_vector, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
      png_write_row(png, row_bytes(y));
    }
    png_write_end(png, nullptr);
  } catch (const PngFailure& e) {
    throw FormatError("PNG encoding failed: " + e.message);
  }
  return out;
}

}  // namespace

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

GrayRaster decode_gray_png(std::span<const std::uint8_t> png) {
  GraySamples s = decode_gray(png);
  if (s.bit_depth != 8) throw FormatError("expected an 8-bit grayscale PNG");
  GrayRaster img(s.width, s.height);
  auto dst = img.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(s.values[i]);
  }
  return img;
}

BinaryRaster decode_binary_png(std::span<const std::uint8_t> png) {
  GrayRaster gray = decode_gray_png(png);
  BinaryRaster img(gray.width(), gray.height());
  auto src = gray.pixels();
  auto dst = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= 128 ? 1 : 0;
  return img;
}

LabelRaster decode_label_png(std::span<const std::uint8_t> png) {
  GraySamples s = decode_gray(png);
  LabelRaster labels(s.width, s.height);
  auto dst = labels.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = s.values[i];
  return labels;
}

Bytes encode_gray_png(const GrayRaster& img) {
  return encode(img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
                [&](int y) { return const_cast<png_bytep>(img.row(y).data()); });
}

Bytes encode_binary_png(const BinaryRaster& img) {
  std::vector<std::uint8_t> row(img.width());
  return encode(img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY, [&](int y) {
    const auto src = img.row(y);
    for (int x = 0; x < img.width(); ++x) row[x] = src[x] ? 255 : 0;
    return row.data();
  });
}

Bytes encode_label_png(const LabelRaster& labels) {
  for (auto v : labels.pixels()) {
    if (v > 65535) {
      throw RangeError("label id " + std::to_string(v) +
                       " does not fit a 16-bit PNG");
    }
  }
  std::vector<std::uint8_t> row(static_cast<std::size_t>(labels.width()) * 2);
  return encode(labels.width(), labels.height(), 16, PNG_COLOR_TYPE_GRAY,
                [&](int y) {
                  const auto src = labels.row(y);
                  for (int x = 0; x < labels.width(); ++x) {
                    row[2 * x] = static_cast<std::uint8_t>(src[x] >> 8);
                    row[2 * x + 1] = static_cast<std::uint8_t>(src[x] & 0xff);
                  }
                  return row.data();
                });
}

Bytes encode_rgb_png(const RgbRaster& img) {
  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width()) * 3);
  return encode(img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, [&](int y) {
    const auto src = img.row(y);
    for (int x = 0; x < img.width(); ++x) {
      row[3 * x] = src[x].r;
      row[3 * x + 1] = src[x].g;
      row[3 * x + 2] = src[x].b;
    }
    return row.data();
  });
}

BinaryRaster load_binary(const std::filesystem::path& path) {
  try {
    return decode_binary_png(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

GrayRaster load_gray(const std::filesystem::path& path) {
  try {
    return decode_gray_png(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

LabelRaster load_label_raster(const std::filesystem::path& path) {
  try {
    return decode_label_png(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_binary(const BinaryRaster& img, const std::filesystem::path& path) {
  write_file(path, encode_binary_png(img));
}

void write_gray(const GrayRaster& img, const std::filesystem::path& path) {
  write_file(path, encode_gray_png(img));
}

void write_label_raster(const LabelRaster& labels,
                        const std::filesystem::path& path) {
  write_file(path, encode_label_png(labels));
}

void write_rgb(const RgbRaster& img, const std::filesystem::path& path) {
  write_file(path, encode_rgb_png(img));
}

}  // namespace linseg
