#include "linseg/binarize.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace linseg {
namespace {

bool is_constant(const GrayRaster& gray) {
  const auto px = gray.pixels();
  return std::all_of(px.begin(), px.end(),
                     [first = px.front()](std::uint8_t v) { return v == first; });
}

BinaryRaster otsu(const GrayRaster& gray) {
  BinaryRaster out(gray.width(), gray.height());
  const int t = otsu_threshold(gray);
  if (t < 0) return out;
  auto src = gray.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] <= t ? 1 : 0;
  return out;
}

// T(x,y) = m * (1 + k * (s / R - 1)) over a window centered on (x,y),
// clipped to the page. Sums come from integral images.
BinaryRaster sauvola(const GrayRaster& gray, const SauvolaMethod& p) {
  if (p.window < 1) throw ContractError("sauvola window must be >= 1");
  const int w = gray.width();
  const int h = gray.height();
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<double> sum(stride * (h + 1), 0.0);
  std::vector<double> sq(stride * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double row_sum = 0.0, row_sq = 0.0;
    for (int x = 0; x < w; ++x) {
      const double v = gray(x, y);
      row_sum += v;
      row_sq += v * v;
      sum[(y + 1) * stride + x + 1] = sum[y * stride + x + 1] + row_sum;
      sq[(y + 1) * stride + x + 1] = sq[y * stride + x + 1] + row_sq;
    }
  }
  auto box = [&](const std::vector<double>& table, int x0, int y0, int x1,
                 int y1) {
    return table[y1 * stride + x1] - table[y0 * stride + x1] -
           table[y1 * stride + x0] + table[y0 * stride + x0];
  };

  BinaryRaster out(w, h);
  const int half = p.window / 2;
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - half);
    const int y1 = std::min(h, y + half + 1);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - half);
      const int x1 = std::min(w, x + half + 1);
      const double n = static_cast<double>(x1 - x0) * (y1 - y0);
      const double mean = box(sum, x0, y0, x1, y1) / n;
      const double var = std::max(0.0, box(sq, x0, y0, x1, y1) / n - mean * mean);
      const double t = mean * (1.0 + p.k * (std::sqrt(var) / p.dynamic_range - 1.0));
      out.set(x, y, gray(x, y) <= t);
    }
  }
  return out;
}

}  // namespace

int otsu_threshold(const GrayRaster& gray) {
  std::array<double, 256> hist{};
  for (auto v : gray.pixels()) hist[v] += 1.0;
  const double total = static_cast<double>(gray.size());
  double weighted_total = 0.0;
  for (int i = 0; i < 256; ++i) weighted_total += i * hist[i];

  int best = -1;
  double best_var = 0.0;
  double w0 = 0.0, sum0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    sum0 += t * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (weighted_total - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best_var) {
      best_var = between;
      best = t;
    }
  }
  return best;
}

BinaryRaster binarize(const GrayRaster& gray, const BinarizeMethod& method) {
  if (gray.empty()) throw ContractError("binarize: empty image");
  if (is_constant(gray)) return BinaryRaster(gray.width(), gray.height());
  return std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, OtsuMethod>) {
          return otsu(gray);
        } else {
          return sauvola(gray, m);
        }
      },
      method);
}

}  // namespace linseg
