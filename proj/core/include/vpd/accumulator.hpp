#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "vpd/config.hpp"
#include "vpd/splash.hpp"

namespace vpd {

/// One splash edge as recorded in the backtracking index.
struct BacktrackEntry {
  std::uint32_t center = 0;    // splash center keypoint
  std::uint32_t endpoint = 0;  // position within that splash's endpoint list
  std::uint32_t neighbor = 0;  // endpoint keypoint
  friend auto operator<=>(const BacktrackEntry&, const BacktrackEntry&) = default;
};

/// Displacement vote grid of (2H+1) x (2W+1) cells for an H x W image. Cell
/// (H, W) is zero displacement. Every vote spreads a window x window Gaussian
/// around its displacement cell; the backtracking index answers which splash
/// edges put mass into a given cell.
class Accumulator {
 public:
  Accumulator() = default;
  Accumulator(int image_width, int image_height, int window);

  int image_width() const noexcept { return image_width_; }
  int image_height() const noexcept { return image_height_; }
  int rows() const noexcept { return 2 * image_height_ + 1; }
  int cols() const noexcept { return 2 * image_width_ + 1; }
  int window() const noexcept { return window_; }

  double at(int row, int col) const noexcept {
    return grid_[static_cast<std::size_t>(row) * cols() + col];
  }
  const std::vector<double>& grid() const noexcept { return grid_; }
  double max_value() const noexcept;
  double total_mass() const noexcept;

  /// Cell that a displacement (dx, dy) is centered on.
  std::pair<int, int> cell_of(int dx, int dy) const noexcept {
    return {image_height_ + dy, image_width_ + dx};
  }

  /// Splash edges whose vote window covers (row, col).
  std::vector<BacktrackEntry> contributors(int row, int col) const;
  /// Splash edges whose vote is centered exactly on (row, col).
  std::vector<BacktrackEntry> centered_at(int row, int col) const;
  std::size_t vote_count() const noexcept { return entries_.size(); }

  /// Votes grouped by center cell: entries()[cell_offsets()[c] .. cell_offsets()[c+1]).
  const std::vector<std::uint32_t>& cell_offsets() const noexcept { return cell_offsets_; }
  const std::vector<BacktrackEntry>& entries() const noexcept { return entries_; }

  friend Accumulator vote(const std::vector<Splash>& splashes, int image_width, int image_height,
                          int window, double sigma);

 private:
  int image_width_ = 0;
  int image_height_ = 0;
  int window_ = 0;
  std::vector<double> grid_;
  // Votes grouped by center cell (CSR layout).
  std::vector<std::uint32_t> cell_offsets_;
  std::vector<BacktrackEntry> entries_;
};

/// Splash edges surviving the accumulator threshold, as deduplicated
/// (origin keypoint, endpoint keypoint) pairs in ascending order.
struct HotspotEdges {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  double threshold_used = 0.0;

  bool empty() const noexcept { return edges.empty(); }
  std::size_t size() const noexcept { return edges.size(); }
};

/// Normalized window x window Gaussian (sums to 1).
std::vector<double> vote_kernel(int window, double sigma);

/// Casts every splash endpoint as a Gaussian vote of mass (k - rank + 1) / k,
/// centered on the endpoint's displacement from its splash center.
Accumulator vote(const std::vector<Splash>& splashes, int image_width, int image_height,
                 int window, double sigma);

/// Threshold T = tau * max(H) (relative) or tau (absolute); returns the union of
/// backtrack entries over all cells with value >= T.
HotspotEdges threshold_peaks(const Accumulator& acc, TauMode mode, double tau_value);

// Debug dumps: uint32 rows, uint32 cols, then float32 grid (little-endian);
// CSV `row,col,dx,dy,value` for cells at or above the threshold.
void write_accumulator_binary(const Accumulator& acc, const std::filesystem::path& path);
void write_surviving_cells_csv(const Accumulator& acc, double threshold,
                               const std::filesystem::path& path);

}  // namespace vpd
