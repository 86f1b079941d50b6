#include "vpd/corruption.hpp"

#include <algorithm>
#include <random>

#include "vpd/error.hpp"
#include "vpd/filters.hpp"

namespace vpd {

namespace {

float clamp_sample(double v) { return static_cast<float>(std::clamp(v, 0.0, 255.0)); }

}  // namespace

std::string_view to_string(CorruptionKind kind) noexcept {
  switch (kind) {
    case CorruptionKind::GaussianNoise: return "noise";
    case CorruptionKind::GaussianBlur: return "blur";
    case CorruptionKind::Brightness: return "brightness";
    case CorruptionKind::LinearContrast: return "contrast";
  }
  return "noise";
}

const std::vector<CorruptionKind>& all_corruption_kinds() {
  static const std::vector<CorruptionKind> kinds = {
      CorruptionKind::GaussianNoise, CorruptionKind::GaussianBlur, CorruptionKind::Brightness,
      CorruptionKind::LinearContrast};
  return kinds;
}

CorruptionKind parse_corruption_kind(std::string_view name) {
  for (auto k : all_corruption_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown corruption kind '" + std::string(name) +
                        "' (valid: noise, blur, brightness, contrast)");
}

Image corrupt_image(const Image& img, CorruptionKind kind, std::uint64_t seed,
                    const CorruptionParams& params) {
  Image out = img;
  auto samples = out.samples();
  switch (kind) {
    case CorruptionKind::GaussianNoise: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> noise(0.0, params.noise_scale);
      for (auto& v : samples) v = clamp_sample(v + noise(rng));
      break;
    }
    case CorruptionKind::GaussianBlur: {
      std::vector<Plane> planes;
      for (int c = 0; c < img.channels(); ++c) {
        planes.push_back(gaussian_blur(channel_plane(img, c), params.blur_sigma));
      }
      out = planes_to_image(planes);
      for (auto& v : out.samples()) v = clamp_sample(v);
      break;
    }
    case CorruptionKind::Brightness:
      for (auto& v : samples) v = clamp_sample(v + params.brightness_delta);
      break;
    case CorruptionKind::LinearContrast:
      for (auto& v : samples) v = clamp_sample(128.0 + params.contrast_factor * (v - 128.0));
      break;
  }
  return out;
}

}  // namespace vpd
