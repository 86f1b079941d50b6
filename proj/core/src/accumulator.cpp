#include "vpd/accumulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "vpd/error.hpp"
#include "vpd/io.hpp"

namespace vpd {

Accumulator::Accumulator(int image_width, int image_height, int window)
    : image_width_(image_width), image_height_(image_height), window_(window) {
  if (image_width <= 0 || image_height <= 0) {
    throw InvalidArgument("accumulator needs positive image dimensions");
  }
  if (window < 1 || window % 2 == 0) throw InvalidArgument("vote window must be odd");
  grid_.assign(static_cast<std::size_t>(rows()) * cols(), 0.0);
  cell_offsets_.assign(grid_.size() + 1, 0);
}

double Accumulator::max_value() const noexcept {
  return grid_.empty() ? 0.0 : *std::max_element(grid_.begin(), grid_.end());
}

double Accumulator::total_mass() const noexcept {
  double sum = 0.0;
  for (double v : grid_) sum += v;
  return sum;
}

std::vector<BacktrackEntry> Accumulator::centered_at(int row, int col) const {
  if (row < 0 || col < 0 || row >= rows() || col >= cols()) return {};
  const std::size_t c = static_cast<std::size_t>(row) * cols() + col;
  return {entries_.begin() + cell_offsets_[c], entries_.begin() + cell_offsets_[c + 1]};
}

std::vector<BacktrackEntry> Accumulator::contributors(int row, int col) const {
  std::vector<BacktrackEntry> out;
  const int half = window_ / 2;
  for (int r = std::max(0, row - half); r <= std::min(rows() - 1, row + half); ++r) {
    for (int c = std::max(0, col - half); c <= std::min(cols() - 1, col + half); ++c) {
      const std::size_t cell = static_cast<std::size_t>(r) * cols() + c;
      out.insert(out.end(), entries_.begin() + cell_offsets_[cell],
                 entries_.begin() + cell_offsets_[cell + 1]);
    }
  }
  return out;
}

std::vector<double> vote_kernel(int window, double sigma) {
  if (window < 1 || window % 2 == 0) throw InvalidArgument("vote window must be odd");
  if (!(sigma > 0)) throw InvalidArgument("vote sigma must be positive");
  const int half = window / 2;
  std::vector<double> taps(window);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    taps[i + half] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += taps[i + half];
  }
  for (double& t : taps) t /= sum;
  std::vector<double> kernel(static_cast<std::size_t>(window) * window);
  for (int y = 0; y < window; ++y) {
    for (int x = 0; x < window; ++x) kernel[static_cast<std::size_t>(y) * window + x] = taps[y] * taps[x];
  }
  return kernel;
}

Accumulator vote(const std::vector<Splash>& splashes, int image_width, int image_height,
                 int window, double sigma) {
  Accumulator acc(image_width, image_height, window);
  const auto kernel = vote_kernel(window, sigma);
  const int half = window / 2;
  const int rows = acc.rows();
  const int cols = acc.cols();

  // Counting pass sizes the CSR index, fill pass stores entries per cell.
  std::vector<std::uint32_t> counts(acc.grid_.size(), 0);
  auto cell_index = [&](const SplashEndpoint& e) {
    const auto [r, c] = acc.cell_of(e.dx, e.dy);
    if (r < 0 || c < 0 || r >= rows || c >= cols) {
      throw InvalidArgument("splash displacement (" + std::to_string(e.dx) + "," +
                            std::to_string(e.dy) + ") lies outside the accumulator");
    }
    return static_cast<std::size_t>(r) * cols + c;
  };
  for (const auto& s : splashes) {
    for (const auto& e : s.endpoints) ++counts[cell_index(e)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) acc.cell_offsets_[c + 1] = acc.cell_offsets_[c] + counts[c];
  acc.entries_.resize(acc.cell_offsets_.back());
  std::vector<std::uint32_t> cursor(acc.cell_offsets_.begin(), acc.cell_offsets_.end() - 1);

  for (const auto& s : splashes) {
    if (s.k < 1) throw InvalidArgument("splash has non-positive k");
    for (std::size_t i = 0; i < s.endpoints.size(); ++i) {
      const auto& e = s.endpoints[i];
      const double weight = static_cast<double>(s.k - e.rank + 1) / s.k;
      const auto [r0, c0] = acc.cell_of(e.dx, e.dy);
      for (int y = -half; y <= half; ++y) {
        const int r = r0 + y;
        if (r < 0 || r >= rows) continue;
        double* grid_row = acc.grid_.data() + static_cast<std::size_t>(r) * cols;
        const double* krow = kernel.data() + static_cast<std::size_t>(y + half) * window;
        for (int x = -half; x <= half; ++x) {
          const int c = c0 + x;
          if (c < 0 || c >= cols) continue;
          grid_row[c] += weight * krow[x + half];
        }
      }
      acc.entries_[cursor[cell_index(e)]++] =
          BacktrackEntry{s.center, static_cast<std::uint32_t>(i), e.neighbor};
    }
  }
  // Canonical order inside each cell keeps the index independent of splash order.
  for (std::size_t c = 0; c + 1 < acc.cell_offsets_.size(); ++c) {
    std::sort(acc.entries_.begin() + acc.cell_offsets_[c], acc.entries_.begin() + acc.cell_offsets_[c + 1]);
  }
  return acc;
}

HotspotEdges threshold_peaks(const Accumulator& acc, TauMode mode, double tau_value) {
  if (acc.grid().empty()) throw InvalidArgument("cannot threshold an empty accumulator");
  HotspotEdges out;
  const double peak = acc.max_value();
  out.threshold_used = mode == TauMode::Relative ? tau_value * peak : tau_value;
  if (peak <= 0.0) return out;

  const int rows = acc.rows();
  const int cols = acc.cols();
  const int half = acc.window() / 2;
  const auto& offsets = acc.cell_offsets();
  const auto& entries = acc.entries();
  const auto& grid = acc.grid();

  for (int r0 = 0; r0 < rows; ++r0) {
    for (int c0 = 0; c0 < cols; ++c0) {
      const std::size_t cell = static_cast<std::size_t>(r0) * cols + c0;
      if (offsets[cell] == offsets[cell + 1]) continue;
      bool survives = false;
      for (int r = std::max(0, r0 - half); r <= std::min(rows - 1, r0 + half) && !survives; ++r) {
        for (int c = std::max(0, c0 - half); c <= std::min(cols - 1, c0 + half); ++c) {
          if (grid[static_cast<std::size_t>(r) * cols + c] >= out.threshold_used) {
            survives = true;
            break;
          }
        }
      }
      if (!survives) continue;
      for (std::uint32_t i = offsets[cell]; i < offsets[cell + 1]; ++i) {
        if (entries[i].center != entries[i].neighbor) {
          out.edges.emplace_back(entries[i].center, entries[i].neighbor);
        }
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

void write_accumulator_binary(const Accumulator& acc, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "dump format assumes little-endian host");
  const auto& grid = acc.grid();
  std::string bytes(8 + grid.size() * sizeof(float), '\0');
  const std::uint32_t header[2] = {static_cast<std::uint32_t>(acc.rows()),
                                   static_cast<std::uint32_t>(acc.cols())};
  std::memcpy(bytes.data(), header, sizeof(header));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const float v = static_cast<float>(grid[i]);
    std::memcpy(bytes.data() + 8 + i * sizeof(float), &v, sizeof(float));
  }
  write_file_atomic(path, bytes);
}

void write_surviving_cells_csv(const Accumulator& acc, double threshold,
                               const std::filesystem::path& path) {
  std::ostringstream out;
  out << "row,col,dx,dy,value\n";
  for (int r = 0; r < acc.rows(); ++r) {
    for (int c = 0; c < acc.cols(); ++c) {
      const double v = acc.at(r, c);
      if (v > 0.0 && v >= threshold) {
        out << r << ',' << c << ',' << c - acc.image_width() << ',' << r - acc.image_height() << ','
            << v << '\n';
      }
    }
  }
  write_file_atomic(path, out.str());
}

}  // namespace vpd
