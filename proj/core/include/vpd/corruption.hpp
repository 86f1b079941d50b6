#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vpd/image.hpp"

namespace vpd {

enum class CorruptionKind { GaussianNoise, GaussianBlur, Brightness, LinearContrast };

/// Robustness-suite strengths.
struct CorruptionParams {
  double noise_scale = 0.1 * 255.0;
  double blur_sigma = 3.0;
  double brightness_delta = 100.0;
  double contrast_factor = 1.5;
};

std::string_view to_string(CorruptionKind kind) noexcept;
/// Accepts "noise", "blur", "brightness", "contrast".
CorruptionKind parse_corruption_kind(std::string_view name);
const std::vector<CorruptionKind>& all_corruption_kinds();

/// Applies one corruption; results are clamped to [0, 255]. Only the noise
/// kind consumes the seed. Contrast scales around mid-gray 128.
Image corrupt_image(const Image& img, CorruptionKind kind, std::uint64_t seed,
                    const CorruptionParams& params = {});

}  // namespace vpd
