#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vpd/filters.hpp"
#include "vpd/image.hpp"

namespace vpd {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Contour keypoints, index-aligned with the DescriptorSet computed from them.
struct KeypointSet {
  std::vector<Point> positions;

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }
  const Point& operator[](std::size_t i) const noexcept { return positions[i]; }
};

// ---------------------------------------------------------------------------
// Canny
// ---------------------------------------------------------------------------

struct CannyParams {
  double sigma = 1.4;  // 5x5 smoothing kernel
  double low = 50.0;
  double high = 150.0;
};

struct GradientField {
  Plane gx;
  Plane gy;
  Plane magnitude;
};

/// Gaussian smoothing followed by 3x3 Sobel on the luma of `img`, rescaled so
/// the largest magnitude is 255 (the 8-bit range the thresholds refer to).
GradientField canny_gradients(const Image& img, double sigma);

/// Edge mask (1 = edge) from the standard chain: smoothing, Sobel,
/// four-sector non-maximum suppression and 8-connected hysteresis.
std::vector<std::uint8_t> canny_edges(const Image& img, const CannyParams& params);

/// Edge pixels at least `border` pixels away from every image side, capped at
/// `budget` by a deterministic uniform row-major subsample.
KeypointSet detect_contour_keypoints(const Image& img, const CannyParams& params,
                                     std::size_t budget, int border);

// ---------------------------------------------------------------------------
// DAISY
// ---------------------------------------------------------------------------

struct DaisyParams {
  int radius = 30;
  int rings = 3;
  int ring_points = 8;
  int orientations = 8;

  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(rings * ring_points + 1) * orientations;
  }
  /// Smoothing applied to the histograms sampled on ring `i` (0-based); the
  /// center uses ring 0's.
  double ring_sigma(int i) const noexcept {
    return radius * (i + 1) / (2.0 * rings);
  }
  double ring_radius(int i) const noexcept { return radius * (i + 1) / static_cast<double>(rings); }

  void validate() const;
};

/// Row-major |C| x dim matrix; each orientation histogram is unit-L2.
struct DescriptorSet {
  std::size_t dim = 0;
  std::vector<float> values;

  std::size_t rows() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const float> row(std::size_t i) const noexcept {
    return std::span<const float>(values).subspan(i * dim, dim);
  }
};

inline constexpr float kDaisyEpsilon = 1e-10f;

DescriptorSet compute_daisy(const Image& img, const KeypointSet& kps, const DaisyParams& params);

// Debug dumps.
void write_keypoints_csv(const KeypointSet& kps, const std::filesystem::path& path);
/// Little-endian: uint32 rows, uint32 dim, then rows*dim float32.
void write_descriptors_binary(const DescriptorSet& desc, const std::filesystem::path& path);
DescriptorSet read_descriptors_binary(const std::filesystem::path& path);

}  // namespace vpd
