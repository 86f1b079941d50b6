#pragma once

#include <vector>

#include "vpd/image.hpp"

namespace vpd {

/// Dense single-channel float plane.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  Plane() = default;
  Plane(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0f) {}

  float at(int x, int y) const noexcept { return data[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) noexcept { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Normalized 1-D Gaussian taps of length 2*radius+1.
std::vector<float> gaussian_kernel(double sigma, int radius);

/// Kernel radius covering +-3 sigma (at least 1).
int gaussian_radius(double sigma);

/// Separable convolution with replicated borders.
Plane convolve_separable(const Plane& src, const std::vector<float>& kernel);

Plane gaussian_blur(const Plane& src, double sigma, int radius);
inline Plane gaussian_blur(const Plane& src, double sigma) {
  return gaussian_blur(src, sigma, gaussian_radius(sigma));
}

Plane channel_plane(const Image& img, int channel);
Image planes_to_image(const std::vector<Plane>& planes);

/// 3x3 Sobel derivatives with replicated borders.
void sobel(const Plane& src, Plane& gx, Plane& gy);

}  // namespace vpd
