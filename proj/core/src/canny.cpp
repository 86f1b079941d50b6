#include "vpd/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "vpd/error.hpp"
#include "vpd/io.hpp"

namespace vpd {

GradientField canny_gradients(const Image& img, double sigma) {
  const Image luma = to_luma(img);
  Plane smooth = gaussian_blur(channel_plane(luma, 0), sigma, 2);
  GradientField g;
  sobel(smooth, g.gx, g.gy);
  g.magnitude = Plane(luma.width(), luma.height());
  float peak = 0.0f;
  for (std::size_t i = 0; i < g.magnitude.data.size(); ++i) {
    g.magnitude.data[i] = std::hypot(g.gx.data[i], g.gy.data[i]);
    peak = std::max(peak, g.magnitude.data[i]);
  }
  if (peak > 0.0f) {
    const float scale = 255.0f / peak;
    for (auto* plane : {&g.gx, &g.gy, &g.magnitude}) {
      for (float& v : plane->data) v *= scale;
    }
  }
  return g;
}

std::vector<std::uint8_t> canny_edges(const Image& img, const CannyParams& params) {
  if (!(params.low > 0) || !(params.high > params.low)) {
    throw InvalidArgument("canny thresholds must satisfy 0 < low < high");
  }
  const GradientField g = canny_gradients(img, params.sigma);
  const int w = img.width();
  const int h = img.height();
  const Plane& mag = g.magnitude;

  // 0 = suppressed, 1 = weak candidate, 2 = strong.
  std::vector<std::uint8_t> state(static_cast<std::size_t>(w) * h, 0);
  constexpr float kTan22 = 0.41421356f;  // tan(22.5 deg)
  constexpr float kTan67 = 2.41421356f;  // tan(67.5 deg)
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const float m = mag.at(x, y);
      if (m <= params.low) continue;
      const float ax = std::fabs(g.gx.at(x, y));
      const float ay = std::fabs(g.gy.at(x, y));
      float n1, n2;
      if (ay <= kTan22 * ax) {
        n1 = mag.at(x - 1, y);
        n2 = mag.at(x + 1, y);
      } else if (ay >= kTan67 * ax) {
        n1 = mag.at(x, y - 1);
        n2 = mag.at(x, y + 1);
      } else if ((g.gx.at(x, y) > 0) == (g.gy.at(x, y) > 0)) {
        n1 = mag.at(x - 1, y - 1);
        n2 = mag.at(x + 1, y + 1);
      } else {
        n1 = mag.at(x + 1, y - 1);
        n2 = mag.at(x - 1, y + 1);
      }
      // Strict on one side so plateaus yield one-pixel-wide edges.
      if (m > n1 && m >= n2) state[static_cast<std::size_t>(y) * w + x] = m > params.high ? 2 : 1;
    }
  }

  std::vector<std::uint8_t> edges(state.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] == 2 && !edges[i]) {
      edges[i] = 1;
      stack.push_back(i);
    }
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int px = static_cast<int>(p % w);
      const int py = static_cast<int>(p / w);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = px + dx, ny = py + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
          if (state[q] != 0 && !edges[q]) {
            edges[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
  }
  return edges;
}

KeypointSet detect_contour_keypoints(const Image& img, const CannyParams& params,
                                     std::size_t budget, int border) {
  if (img.width() < 2 * border + 1 || img.height() < 2 * border + 1) {
    throw InvalidArgument("image " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + " is smaller than the descriptor support " +
                          std::to_string(2 * border + 1) + "x" + std::to_string(2 * border + 1));
  }
  const auto edges = canny_edges(img, params);
  const int w = img.width();
  const int h = img.height();

  std::vector<Point> candidates;
  for (int y = border; y < h - border; ++y) {
    for (int x = border; x < w - border; ++x) {
      if (edges[static_cast<std::size_t>(y) * w + x]) candidates.push_back({x, y});
    }
  }

  KeypointSet out;
  const std::size_t n = candidates.size();
  if (n <= budget) {
    out.positions = std::move(candidates);
    return out;
  }
  out.positions.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    out.positions.push_back(candidates[(i * n) / budget]);
  }
  return out;
}

void write_keypoints_csv(const KeypointSet& kps, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "x,y\n";
  for (const auto& p : kps.positions) out << p.x << ',' << p.y << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace vpd
