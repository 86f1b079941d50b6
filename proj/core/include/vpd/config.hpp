#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vpd {

enum class TauMode { Relative, Absolute };

std::string_view to_string(TauMode mode) noexcept;
TauMode parse_tau_mode(std::string_view text);

/// Every tunable of the discovery pipeline. Defaults reproduce the published
/// setting (|C|=9000, k=15, r=30, |P|=150, 11x11 vote window).
struct PipelineConfig {
  // [features]
  int keypoint_budget = 9000;
  double canny_sigma = 1.4;
  double canny_low = 50.0;
  double canny_high = 150.0;
  int daisy_radius = 30;

  // [splash]
  int knn_k = 15;
  double exclusion_radius = 10.0;
  int vote_window = 11;
  TauMode tau_mode = TauMode::Relative;
  double tau_value = 0.05;

  // [superpixels]
  int superpixel_count = 150;
  double compactness = 10.0;
  int slic_iterations = 10;

  // [graph]
  double alpha = 0.5;
  int min_category_nodes = 2;

  // [run]
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the first field that violates its bound.
  void validate() const;

  /// Sets one field from its textual form. Throws ConfigError for unknown
  /// keys or unparsable values. Does not validate bounds.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// Flat list of every key, in file order.
  static const std::vector<std::string>& keys();
  static std::string_view section_of(std::string_view key);

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Parses `key = value` lines grouped under `[section]` headers. Missing keys
/// keep their defaults; the result is validated.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

std::string format_config(const PipelineConfig& config);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

}  // namespace vpd
