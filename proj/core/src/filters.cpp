#include "vpd/filters.hpp"

#include <algorithm>
#include <cmath>

#include "vpd/error.hpp"

namespace vpd {

std::vector<float> gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0) || radius < 0) throw InvalidArgument("gaussian kernel needs sigma > 0");
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += taps[i + radius];
  }
  std::vector<float> out(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) out[i] = static_cast<float>(taps[i] / sum);
  return out;
}

int gaussian_radius(double sigma) {
  return std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
}

Plane convolve_separable(const Plane& src, const std::vector<float>& kernel) {
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = src.width;
  const int h = src.height;
  Plane tmp(w, h);
  Plane out(w, h);

  std::vector<float> row(w + 2 * r);
  for (int y = 0; y < h; ++y) {
    const float* in = &src.data[static_cast<std::size_t>(y) * w];
    for (int i = 0; i < w + 2 * r; ++i) row[i] = in[std::clamp(i - r, 0, w - 1)];
    float* dst = &tmp.data[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (std::size_t k = 0; k < kernel.size(); ++k) acc += kernel[k] * row[x + k];
      dst[x] = acc;
    }
  }

  // Vertical pass accumulates whole rows to stay cache friendly.
  std::vector<float> acc(w);
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0f);
    for (int k = -r; k <= r; ++k) {
      const int yy = std::clamp(y + k, 0, h - 1);
      const float tap = kernel[k + r];
      const float* in = &tmp.data[static_cast<std::size_t>(yy) * w];
      for (int x = 0; x < w; ++x) acc[x] += tap * in[x];
    }
    std::copy(acc.begin(), acc.end(), out.data.begin() + static_cast<std::ptrdiff_t>(y) * w);
  }
  return out;
}

Plane gaussian_blur(const Plane& src, double sigma, int radius) {
  return convolve_separable(src, gaussian_kernel(sigma, radius));
}

Plane channel_plane(const Image& img, int channel) {
  Plane p(img.width(), img.height());
  const auto s = img.samples();
  const int c = img.channels();
  for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] = s[i * c + channel];
  return p;
}

Image planes_to_image(const std::vector<Plane>& planes) {
  const int c = static_cast<int>(planes.size());
  const int w = planes.front().width;
  const int h = planes.front().height;
  std::vector<float> samples(static_cast<std::size_t>(w) * h * c);
  for (int ch = 0; ch < c; ++ch) {
    for (std::size_t i = 0; i < planes[ch].data.size(); ++i) samples[i * c + ch] = planes[ch].data[i];
  }
  return Image(w, h, c, std::move(samples));
}

void sobel(const Plane& src, Plane& gx, Plane& gy) {
  const int w = src.width;
  const int h = src.height;
  gx = Plane(w, h);
  gy = Plane(w, h);
  auto px = [&](int x, int y) { return src.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float a = px(x - 1, y - 1), b = px(x, y - 1), c = px(x + 1, y - 1);
      const float d = px(x - 1, y), f = px(x + 1, y);
      const float g = px(x - 1, y + 1), hh = px(x, y + 1), i = px(x + 1, y + 1);
      gx.at(x, y) = (c + 2 * f + i) - (a + 2 * d + g);
      gy.at(x, y) = (g + 2 * hh + i) - (a + 2 * b + c);
    }
  }
}

}  // namespace vpd
