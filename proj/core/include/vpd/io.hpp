#pragma once

#include <filesystem>
#include <string_view>

#include "vpd/image.hpp"

namespace vpd {

/// Decodes a PNG. Palette and sub-byte images are expanded, alpha is
/// dropped, 16-bit samples are scaled to [0, 255]. Gray stays 1-channel,
/// everything else becomes RGB.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG; samples are rounded and clamped to [0, 255].
void save_image(const Image& img, const std::filesystem::path& path);

/// Label maps persist as 16-bit single-channel PNG. Throws InvalidArgument
/// for labels above 65535.
void save_label_map(const LabelMap& map, const std::filesystem::path& path);
LabelMap load_label_map(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace vpd
