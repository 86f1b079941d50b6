#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vpd/evaluation.hpp"
#include "vpd/image.hpp"

namespace vpd::testing {

Image uniform_image(int width, int height, float value, int channels = 1);

/// Smoothed random blobs in [0, 255]: dense, non-repeating edges.
Image random_texture(int width, int height, std::uint64_t seed, int channels = 1);

/// Random piecewise-constant RGB image (rectangles over noise), used as SLIC input.
Image random_scene(int width, int height, std::uint64_t seed);

/// Copies `patch` into `dst` with its top-left corner at (x0, y0).
void paste(Image& dst, const Image& patch, int x0, int y0);

/// `left` next to an identical copy of itself.
Image side_by_side_copy(const Image& left);

/// Black 200x200 image with a centered white 60x60 square.
Image white_square();

void paint(LabelMap& map, int x0, int y0, int w, int h, std::uint32_t label);

/// Instances given explicitly as an instance-id map plus the pattern of each instance.
PatternInstances make_instances(const LabelMap& instance_ids,
                                std::vector<std::uint32_t> pattern_of_instance);

/// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_temp_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

}  // namespace vpd::testing
