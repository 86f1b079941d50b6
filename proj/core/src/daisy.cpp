#include "vpd/features.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>

#include "vpd/error.hpp"
#include "vpd/io.hpp"
#include "vpd/parallel.hpp"

namespace vpd {

namespace {

// Horizontal pass vectorizes over x, vertical pass over whole rows.
Plane smooth(const Plane& src, double sigma) {
  const auto kernel = gaussian_kernel(sigma, gaussian_radius(sigma));
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = src.width;
  const int h = src.height;
  Plane tmp(w, h);
  std::vector<float> padded(w + 2 * r);
  for (int y = 0; y < h; ++y) {
    const float* in = &src.data[static_cast<std::size_t>(y) * w];
    for (int i = 0; i < w + 2 * r; ++i) padded[i] = in[std::clamp(i - r, 0, w - 1)];
    float* out = &tmp.data[static_cast<std::size_t>(y) * w];
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      const float tap = kernel[k];
      const float* p = padded.data() + k;
      for (int x = 0; x < w; ++x) out[x] += tap * p[x];
    }
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    float* dst = &out.data[static_cast<std::size_t>(y) * w];
    for (int k = -r; k <= r; ++k) {
      const float tap = kernel[k + r];
      const float* in = &tmp.data[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w];
      for (int x = 0; x < w; ++x) dst[x] += tap * in[x];
    }
  }
  return out;
}

float bilinear(const Plane& p, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const float fx = static_cast<float>(x - x0);
  const float fy = static_cast<float>(y - y0);
  const int x1 = std::min(x0 + 1, p.width - 1);
  const int y1 = std::min(y0 + 1, p.height - 1);
  const float top = p.at(x0, y0) * (1 - fx) + p.at(x1, y0) * fx;
  const float bottom = p.at(x0, y1) * (1 - fx) + p.at(x1, y1) * fx;
  return top * (1 - fy) + bottom * fy;
}

void normalize_block(float* block, int n) {
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    block[i] += kDaisyEpsilon;
    sq += static_cast<double>(block[i]) * block[i];
  }
  const float inv = static_cast<float>(1.0 / std::sqrt(sq));
  for (int i = 0; i < n; ++i) block[i] *= inv;
}

}  // namespace

void DaisyParams::validate() const {
  if (rings < 1 || radius < rings) throw InvalidArgument("DAISY requires radius >= rings >= 1");
  if (ring_points < 4) throw InvalidArgument("DAISY requires at least 4 histograms per ring");
  if (orientations < 4) throw InvalidArgument("DAISY requires at least 4 orientation bins");
}

DescriptorSet compute_daisy(const Image& img, const KeypointSet& kps, const DaisyParams& params) {
  params.validate();
  const int w = img.width();
  const int h = img.height();
  for (const auto& p : kps.positions) {
    if (p.x < params.radius || p.y < params.radius || p.x >= w - params.radius ||
        p.y >= h - params.radius) {
      throw InvalidArgument("keypoint (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                            ") is closer than the DAISY radius to the image border");
    }
  }

  DescriptorSet out;
  out.dim = params.dim();
  out.values.assign(kps.size() * out.dim, 0.0f);
  if (kps.empty()) return out;

  const Plane luma = channel_plane(to_luma(img), 0);
  const int nori = params.orientations;

  // Rectified directional derivatives, one map per orientation bin.
  std::vector<Plane> oriented(nori, Plane(w, h));
  std::vector<float> cos_o(nori), sin_o(nori);
  for (int o = 0; o < nori; ++o) {
    const double theta = 2.0 * std::numbers::pi * o / nori;
    cos_o[o] = static_cast<float>(std::cos(theta));
    sin_o[o] = static_cast<float>(std::sin(theta));
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float gx = 0.5f * (luma.at(std::min(x + 1, w - 1), y) - luma.at(std::max(x - 1, 0), y));
      const float gy = 0.5f * (luma.at(x, std::min(y + 1, h - 1)) - luma.at(x, std::max(y - 1, 0)));
      for (int o = 0; o < nori; ++o) {
        oriented[o].at(x, y) = std::max(0.0f, cos_o[o] * gx + sin_o[o] * gy);
      }
    }
  }

  // layers[ring][orientation]
  std::vector<std::vector<Plane>> layers(params.rings, std::vector<Plane>(nori));
  parallel_for(static_cast<std::size_t>(params.rings * nori), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const int ring = static_cast<int>(i) / nori;
      const int o = static_cast<int>(i) % nori;
      layers[ring][o] = smooth(oriented[o], params.ring_sigma(ring));
    }
  }, 1);

  // Sample offsets are shared by every keypoint.
  struct Offset {
    int ring;
    double dx, dy;
  };
  std::vector<Offset> offsets;
  for (int ring = 0; ring < params.rings; ++ring) {
    const double rad = params.ring_radius(ring);
    for (int j = 0; j < params.ring_points; ++j) {
      const double a = 2.0 * std::numbers::pi * j / params.ring_points;
      offsets.push_back({ring, rad * std::cos(a), rad * std::sin(a)});
    }
  }

  parallel_for(kps.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const Point p = kps[k];
      float* row = out.values.data() + k * out.dim;
      for (int o = 0; o < nori; ++o) row[o] = layers[0][o].at(p.x, p.y);
      normalize_block(row, nori);
      for (std::size_t s = 0; s < offsets.size(); ++s) {
        float* block = row + (s + 1) * nori;
        const auto& off = offsets[s];
        for (int o = 0; o < nori; ++o) {
          block[o] = bilinear(layers[off.ring][o], p.x + off.dx, p.y + off.dy);
        }
        normalize_block(block, nori);
      }
    }
  });
  return out;
}

void write_descriptors_binary(const DescriptorSet& desc, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "dump format assumes little-endian host");
  std::string bytes(8 + desc.values.size() * sizeof(float), '\0');
  const std::uint32_t header[2] = {static_cast<std::uint32_t>(desc.rows()),
                                   static_cast<std::uint32_t>(desc.dim)};
  std::memcpy(bytes.data(), header, sizeof(header));
  std::memcpy(bytes.data() + 8, desc.values.data(), desc.values.size() * sizeof(float));
  write_file_atomic(path, bytes);
}

DescriptorSet read_descriptors_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": file not found");
  std::uint32_t header[2] = {0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw IoError(path.string() + ": truncated descriptor header");
  DescriptorSet d;
  d.dim = header[1];
  d.values.resize(static_cast<std::size_t>(header[0]) * header[1]);
  in.read(reinterpret_cast<char*>(d.values.data()),
          static_cast<std::streamsize>(d.values.size() * sizeof(float)));
  if (!in) throw IoError(path.string() + ": truncated descriptor data");
  return d;
}

}  // namespace vpd
