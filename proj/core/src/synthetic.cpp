#include "vpd/synthetic.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "vpd/error.hpp"

namespace vpd {

namespace {

using Rgb = std::array<float, 3>;

constexpr Rgb kCanvas = {96.0f, 96.0f, 96.0f};

float luma(const Rgb& c) { return 0.299f * c[0] + 0.587f * c[1] + 0.114f * c[2]; }

struct Palette {
  Rgb tile;
  std::array<Rgb, 3> accents;
};

Rgb random_color(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> channel(0, 255);
  return {static_cast<float>(channel(rng)), static_cast<float>(channel(rng)),
          static_cast<float>(channel(rng))};
}

bool contrast_in_band(const Rgb& a, const Rgb& b) {
  const float d = std::abs(luma(a) - luma(b));
  return d >= 70.0f && d <= 110.0f;
}

// Tile and accent edges all have a luma step in the same band, so no motif
// is drowned out by a much stronger one.
Palette make_palette(std::uint64_t seed, int family) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x1000 + family);
  Palette p;
  do {
    p.tile = random_color(rng);
  } while (!contrast_in_band(p.tile, kCanvas));
  for (auto& a : p.accents) {
    do {
      a = random_color(rng);
    } while (!contrast_in_band(a, p.tile));
  }
  return p;
}

// Motif tile as s*s RGB samples.
std::vector<Rgb> render_motif(std::uint64_t seed, int motif, const Palette& palette, int s) {
  std::mt19937_64 rng(seed * 0xD1B54A32D192ED03ULL + 0x2000 + motif);
  std::vector<Rgb> tile(static_cast<std::size_t>(s) * s, palette.tile);
  auto put = [&](int x, int y, const Rgb& c) {
    if (x >= 0 && y >= 0 && x < s && y < s) tile[static_cast<std::size_t>(y) * s + x] = c;
  };
  std::uniform_int_distribution<int> shape_count(4, 6);
  std::uniform_int_distribution<int> shape_kind(0, 3);
  std::uniform_int_distribution<int> accent(0, 2);
  std::uniform_int_distribution<int> pos(0, s - 1);
  std::uniform_int_distribution<int> extent(s / 6, s / 2);

  const int shapes = shape_count(rng);
  for (int i = 0; i < shapes; ++i) {
    const Rgb& c = palette.accents[accent(rng)];
    const int cx = pos(rng), cy = pos(rng);
    const int ex = extent(rng), ey = extent(rng);
    switch (shape_kind(rng)) {
      case 0:  // rectangle
        for (int y = cy - ey / 2; y <= cy + ey / 2; ++y)
          for (int x = cx - ex / 2; x <= cx + ex / 2; ++x) put(x, y, c);
        break;
      case 1:  // ellipse
        for (int y = cy - ey / 2; y <= cy + ey / 2; ++y)
          for (int x = cx - ex / 2; x <= cx + ex / 2; ++x) {
            const double nx = (x - cx) / (ex / 2.0 + 0.5), ny = (y - cy) / (ey / 2.0 + 0.5);
            if (nx * nx + ny * ny <= 1.0) put(x, y, c);
          }
        break;
      case 2: {  // stripes
        const int period = std::max(4, ex / 3);
        const bool vertical = (ey % 2) == 0;
        for (int y = cy - ey / 2; y <= cy + ey / 2; ++y)
          for (int x = cx - ex / 2; x <= cx + ex / 2; ++x) {
            const int t = vertical ? x - (cx - ex / 2) : y - (cy - ey / 2);
            if ((t / (period / 2)) % 2 == 0) put(x, y, c);
          }
        break;
      }
      default:  // triangle
        for (int y = 0; y <= ey; ++y) {
          const int half = (ex * y) / (2 * std::max(ey, 1));
          for (int x = cx - half; x <= cx + half; ++x) put(x, cy - ey / 2 + y, c);
        }
        break;
    }
  }
  return tile;
}

}  // namespace

int SyntheticSpec::capacity() const noexcept {
  const int cell = cell_size();
  return (width / cell) * (height / cell);
}

void SyntheticSpec::validate() const {
  if (motifs < 1 || instances < 1) throw InvalidArgument("synthetic scene needs >= 1 motif and instance");
  if (width <= 0 || height <= 0) throw InvalidArgument("synthetic canvas must be non-empty");
  if (motif_size < 8) throw InvalidArgument("motif_size must be at least 8 pixels");
  if (jitter < 0 || spacing < 0) throw InvalidArgument("jitter and spacing must be non-negative");
  if (noise < 0) throw InvalidArgument("noise level must be non-negative");
  if (static_cast<long long>(motifs) * instances > capacity()) {
    throw InvalidArgument(std::to_string(motifs * instances) + " placements exceed the canvas capacity of " +
                          std::to_string(capacity()) + " cells");
  }
}

SyntheticScene generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const int w = spec.width, h = spec.height, s = spec.motif_size;
  const int cell = spec.cell_size();
  const int cols = w / cell;
  const int rows = h / cell;

  std::vector<std::vector<Rgb>> tiles;
  for (int m = 0; m < spec.motifs; ++m) {
    tiles.push_back(render_motif(spec.seed, m, make_palette(spec.seed, m / 2), s));
  }

  std::vector<float> samples(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = kCanvas[i % 3];
  SyntheticScene scene{Image(), LabelMap(w, h), LabelMap(w, h)};

  std::mt19937_64 rng(spec.seed);
  std::vector<int> cells(static_cast<std::size_t>(rows) * cols);
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::uniform_int_distribution<int> jitter(-spec.jitter, spec.jitter);

  // Grid is centered on the canvas.
  const int ox = (w - cols * cell) / 2;
  const int oy = (h - rows * cell) / 2;
  const int placements = spec.motifs * spec.instances;
  for (int t = 0; t < placements; ++t) {
    const int m = t % spec.motifs;
    const int cx = cells[t] % cols, cy = cells[t] / cols;
    const int x0 = ox + cx * cell + (cell - s) / 2 + jitter(rng);
    const int y0 = oy + cy * cell + (cell - s) / 2 + jitter(rng);
    for (int y = 0; y < s; ++y) {
      for (int x = 0; x < s; ++x) {
        const std::size_t p = static_cast<std::size_t>(y0 + y) * w + (x0 + x);
        const Rgb& c = tiles[m][static_cast<std::size_t>(y) * s + x];
        for (int ch = 0; ch < 3; ++ch) samples[3 * p + ch] = c[ch];
        scene.level2[p] = static_cast<std::uint32_t>(m + 1);
        scene.level1[p] = static_cast<std::uint32_t>(m / 2 + 1);
      }
    }
  }

  if (spec.noise > 0) {
    std::normal_distribution<double> noise(0.0, spec.noise * 255.0);
    for (auto& v : samples) v = static_cast<float>(std::clamp(v + noise(rng), 0.0, 255.0));
  }
  scene.image = Image(w, h, 3, std::move(samples));
  return scene;
}

}  // namespace vpd
