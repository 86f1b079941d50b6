#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vpd {

/// Row-major pixel grid with 1 (gray) or 3 (RGB) interleaved channels.
/// Samples are stored as float in [0, 255].
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels);
  Image(int width, int height, int channels, std::vector<float> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return samples_.empty(); }

  float at(int x, int y, int c = 0) const noexcept {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float& at(int x, int y, int c = 0) noexcept {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const float> samples() const noexcept { return samples_; }
  std::span<float> samples() noexcept { return samples_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> samples_;
};

/// Single-channel luma. Gray images are copied; RGB uses ITU-R 601 weights.
Image to_luma(const Image& img);

/// Per-pixel non-negative integer labels; 0 is background.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height);
  LabelMap(int width, int height, std::vector<std::uint32_t> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  std::uint32_t at(int x, int y) const noexcept {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint32_t& at(int x, int y) noexcept {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint32_t operator[](std::size_t i) const noexcept { return labels_[i]; }
  std::uint32_t& operator[](std::size_t i) noexcept { return labels_[i]; }

  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  std::span<std::uint32_t> labels() noexcept { return labels_; }

  std::uint32_t max_label() const noexcept;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> labels_;
};

/// Renumbers nonzero labels to 1..L in order of first appearance (row-major).
/// Background stays 0.
LabelMap canonicalize(const LabelMap& map);

}  // namespace vpd
