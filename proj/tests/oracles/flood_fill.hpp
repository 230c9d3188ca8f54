#pragma once

// Reference labeling by breadth-first flood fill from every unvisited
// foreground pixel in raster order.

#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

namespace oracle {

struct FloodResult {
  int count = 0;
  std::vector<int> labels;  // row-major, 0 = background
};

inline FloodResult flood_fill(const std::vector<std::uint8_t>& bits, int w, int h, int connectivity) {
  FloodResult r;
  r.labels.assign(bits.size(), 0);
  std::vector<std::pair<int, int>> steps = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (connectivity == 8) {
    steps.insert(steps.end(), {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!bits[y * w + x] || r.labels[y * w + x]) continue;
      const int id = ++r.count;
      std::queue<std::pair<int, int>> q;
      q.push({x, y});
      r.labels[y * w + x] = id;
      while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop();
        for (auto [dx, dy] : steps) {
          const int nx = cx + dx, ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (!bits[ny * w + nx] || r.labels[ny * w + nx]) continue;
          r.labels[ny * w + nx] = id;
          q.push({nx, ny});
        }
      }
    }
  }
  return r;
}

}  // namespace oracle
