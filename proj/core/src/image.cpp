#include "vpd/image.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "vpd/error.hpp"

namespace vpd {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Image::Image(int width, int height, int channels)
    : Image(width, height, channels,
            std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                               std::max(height, 0) * std::max(channels, 0))) {}

Image::Image(int width, int height, int channels, std::vector<float> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  if (samples_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw InvalidArgument("sample count does not match image dimensions");
  }
}

Image to_luma(const Image& img) {
  if (img.channels() == 1) return img;
  std::vector<float> out(img.pixel_count());
  const auto src = img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299f * src[3 * i] + 0.587f * src[3 * i + 1] + 0.114f * src[3 * i + 2];
  }
  return Image(img.width(), img.height(), 1, std::move(out));
}

LabelMap::LabelMap(int width, int height)
    : LabelMap(width, height,
               std::vector<std::uint32_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                          std::max(height, 0))) {}

LabelMap::LabelMap(int width, int height, std::vector<std::uint32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width, height);
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("label count does not match map dimensions");
  }
}

std::uint32_t LabelMap::max_label() const noexcept {
  return labels_.empty() ? 0 : *std::max_element(labels_.begin(), labels_.end());
}

LabelMap canonicalize(const LabelMap& map) {
  LabelMap out = map;
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::uint32_t next = 1;
  for (auto& l : out.labels()) {
    if (l == 0) continue;
    auto [it, inserted] = remap.try_emplace(l, next);
    if (inserted) ++next;
    l = it->second;
  }
  return out;
}

}  // namespace vpd
