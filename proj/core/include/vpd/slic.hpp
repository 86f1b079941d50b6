#pragma once

#include <array>
#include <vector>

#include "vpd/image.hpp"

namespace vpd {

struct SuperpixelCenter {
  double x = 0.0;
  double y = 0.0;
  std::array<double, 3> color{};  // CIELAB for RGB input, intensity in [0] for gray
  std::size_t area = 0;
};

/// Labels 1..count() cover every pixel; each label is one 4-connected region.
/// centers[l - 1] describes label l.
struct SuperpixelLabeling {
  LabelMap labels;
  std::vector<SuperpixelCenter> centers;

  int count() const noexcept { return static_cast<int>(centers.size()); }
};

struct SlicParams {
  int count = 150;
  double compactness = 10.0;
  int iterations = 10;
};

/// sRGB (0..255) to CIELAB under D65.
std::array<double, 3> rgb_to_lab(double r, double g, double b) noexcept;

/// Simple linear iterative clustering in (color, x/S, y/S) with
/// S = sqrt(N / seeds), a 2S x 2S search window, then connectivity enforcement:
/// each cluster keeps its largest fragment if it spans at least S^2/4 pixels,
/// every other fragment joins its largest adjacent superpixel.
SuperpixelLabeling slic_segment(const Image& img, const SlicParams& params);

}  // namespace vpd
