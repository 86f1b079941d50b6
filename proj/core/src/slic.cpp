#include "vpd/slic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "vpd/error.hpp"

namespace vpd {

namespace {

double srgb_to_linear(double c) {
  c /= 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double kDelta = 6.0 / 29.0;
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3 * kDelta * kDelta) + 4.0 / 29.0;
}

// Per-pixel clustering features: Lab triples or a single intensity.
struct Features {
  int dims = 1;
  std::vector<float> values;  // pixel-major
  const float* at(std::size_t i) const { return values.data() + i * dims; }
};

Features make_features(const Image& img) {
  Features f;
  const auto s = img.samples();
  if (img.channels() == 1) {
    f.dims = 1;
    f.values.assign(s.begin(), s.end());
    return f;
  }
  f.dims = 3;
  f.values.resize(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto lab = rgb_to_lab(s[3 * i], s[3 * i + 1], s[3 * i + 2]);
    for (int c = 0; c < 3; ++c) f.values[3 * i + c] = static_cast<float>(lab[c]);
  }
  return f;
}

struct Cluster {
  double x, y;
  std::array<double, 3> color;
};

// Grid of nx * ny <= count seeds following the image aspect ratio.
std::pair<int, int> seed_grid(int w, int h, int count) {
  int nx = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count) * w / h)));
  nx = std::clamp(nx, 1, std::min(count, w));
  int ny = std::clamp(count / nx, 1, h);
  return {nx, ny};
}

}  // namespace

std::array<double, 3> rgb_to_lab(double r, double g, double b) noexcept {
  const double rl = srgb_to_linear(r), gl = srgb_to_linear(g), bl = srgb_to_linear(b);
  const double x = (0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl) / 0.95047;
  const double y = (0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl);
  const double z = (0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl) / 1.08883;
  const double fx = lab_f(x), fy = lab_f(y), fz = lab_f(z);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

SuperpixelLabeling slic_segment(const Image& img, const SlicParams& params) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.pixel_count();
  if (params.count < 2) throw InvalidArgument("superpixel count must be at least 2");
  if (static_cast<std::size_t>(params.count) > n) {
    throw InvalidArgument("superpixel count " + std::to_string(params.count) +
                          " exceeds the pixel count " + std::to_string(n));
  }
  if (!(params.compactness > 0)) throw InvalidArgument("compactness must be positive");
  if (params.iterations < 1) throw InvalidArgument("SLIC needs at least one iteration");

  const Features feat = make_features(img);
  const int dims = feat.dims;
  const auto [nx, ny] = seed_grid(w, h, params.count);
  const double step = std::sqrt(static_cast<double>(n) / (nx * ny));

  auto gradient = [&](int x, int y) {
    const float* l = feat.at(static_cast<std::size_t>(y) * w + std::max(x - 1, 0));
    const float* r = feat.at(static_cast<std::size_t>(y) * w + std::min(x + 1, w - 1));
    const float* u = feat.at(static_cast<std::size_t>(std::max(y - 1, 0)) * w + x);
    const float* d = feat.at(static_cast<std::size_t>(std::min(y + 1, h - 1)) * w + x);
    double g = 0.0;
    for (int c = 0; c < dims; ++c) g += (r[c] - l[c]) * (r[c] - l[c]) + (d[c] - u[c]) * (d[c] - u[c]);
    return g;
  };

  std::vector<Cluster> clusters;
  clusters.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int sx = static_cast<int>((i + 0.5) * w / nx);
      int sy = static_cast<int>((j + 0.5) * h / ny);
      double best = std::numeric_limits<double>::infinity();
      int bx = sx, by = sy;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = sx + dx, y = sy + dy;
          if (x < 0 || y < 0 || x >= w || y >= h) continue;
          const double g = gradient(x, y);
          if (g < best) {
            best = g;
            bx = x;
            by = y;
          }
        }
      }
      Cluster c{static_cast<double>(bx), static_cast<double>(by), {}};
      const float* v = feat.at(static_cast<std::size_t>(by) * w + bx);
      for (int d = 0; d < dims; ++d) c.color[d] = v[d];
      clusters.push_back(c);
    }
  }

  const double spatial_weight = (params.compactness * params.compactness) / (step * step);
  std::vector<int> assign(n, -1);
  std::vector<float> dist(n);
  const int radius = static_cast<int>(std::ceil(step));

  for (int it = 0; it < params.iterations; ++it) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<float>::infinity());
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      const Cluster& c = clusters[k];
      const int x0 = std::max(0, static_cast<int>(c.x) - radius);
      const int x1 = std::min(w - 1, static_cast<int>(c.x) + radius);
      const int y0 = std::max(0, static_cast<int>(c.y) - radius);
      const int y1 = std::min(h - 1, static_cast<int>(c.y) + radius);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          const float* v = feat.at(p);
          double dc = 0.0;
          for (int d = 0; d < dims; ++d) dc += (v[d] - c.color[d]) * (v[d] - c.color[d]);
          const double ds = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
          const float D = static_cast<float>(dc + ds * spatial_weight);
          if (D < dist[p]) {
            dist[p] = D;
            assign[p] = static_cast<int>(k);
          }
        }
      }
    }
    // Exact integer position sums keep the update order-independent.
    std::vector<long long> sx(clusters.size(), 0), sy(clusters.size(), 0), cnt(clusters.size(), 0);
    std::vector<std::array<double, 3>> scol(clusters.size(), {0, 0, 0});
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const int k = assign[p];
        if (k < 0) continue;
        sx[k] += x;
        sy[k] += y;
        ++cnt[k];
        const float* v = feat.at(p);
        for (int d = 0; d < dims; ++d) scol[k][d] += v[d];
      }
    }
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if (cnt[k] == 0) continue;
      clusters[k].x = static_cast<double>(sx[k]) / cnt[k];
      clusters[k].y = static_cast<double>(sy[k]) / cnt[k];
      for (int d = 0; d < dims; ++d) clusters[k].color[d] = scol[k][d] / cnt[k];
    }
  }

  // Connected fragments of the raw assignment.
  std::vector<int> comp(n, -1);
  std::vector<int> comp_cluster;
  std::vector<std::size_t> comp_size;
  {
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
      if (comp[start] >= 0) continue;
      const int id = static_cast<int>(comp_cluster.size());
      const int cl = assign[start];
      comp_cluster.push_back(cl);
      comp_size.push_back(0);
      comp[start] = id;
      stack.push_back(start);
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        ++comp_size[id];
        const int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
        const int nbx[4] = {px - 1, px + 1, px, px};
        const int nby[4] = {py, py, py - 1, py + 1};
        for (int i = 0; i < 4; ++i) {
          if (nbx[i] < 0 || nby[i] < 0 || nbx[i] >= w || nby[i] >= h) continue;
          const std::size_t q = static_cast<std::size_t>(nby[i]) * w + nbx[i];
          if (comp[q] < 0 && assign[q] == cl) {
            comp[q] = id;
            stack.push_back(q);
          }
        }
      }
    }
  }
  const std::size_t ncomp = comp_cluster.size();

  // Largest fragment per cluster survives if big enough.
  const double min_area = step * step / 4.0;
  std::vector<int> largest(clusters.size(), -1);
  for (std::size_t c = 0; c < ncomp; ++c) {
    const int cl = comp_cluster[c];
    if (cl < 0) continue;
    if (largest[cl] < 0 || comp_size[c] > comp_size[largest[cl]]) largest[cl] = static_cast<int>(c);
  }
  std::vector<int> region(ncomp, -1);  // component -> surviving component id
  bool any = false;
  for (int c : largest) {
    if (c >= 0 && static_cast<double>(comp_size[c]) >= min_area) {
      region[c] = c;
      any = true;
    }
  }
  if (!any) {
    const auto it = std::max_element(comp_size.begin(), comp_size.end());
    const int c = static_cast<int>(it - comp_size.begin());
    region[c] = c;
  }

  std::vector<std::set<int>> adjacent(ncomp);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = comp[static_cast<std::size_t>(y) * w + x];
      if (x + 1 < w) {
        const int b = comp[static_cast<std::size_t>(y) * w + x + 1];
        if (a != b) {
          adjacent[a].insert(b);
          adjacent[b].insert(a);
        }
      }
      if (y + 1 < h) {
        const int b = comp[static_cast<std::size_t>(y + 1) * w + x];
        if (a != b) {
          adjacent[a].insert(b);
          adjacent[b].insert(a);
        }
      }
    }
  }

  std::vector<std::size_t> region_area(ncomp, 0);
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (region[c] == static_cast<int>(c)) region_area[c] = comp_size[c];
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < ncomp; ++c) {
      if (region[c] >= 0) continue;
      int best = -1;
      for (int nb : adjacent[c]) {
        const int r = region[nb];
        if (r < 0) continue;
        if (best < 0 || region_area[r] > region_area[best] ||
            (region_area[r] == region_area[best] && r < best)) {
          best = r;
        }
      }
      if (best < 0) continue;
      region[c] = best;
      region_area[best] += comp_size[c];
      changed = true;
    }
  }

  LabelMap raw(w, h);
  for (std::size_t p = 0; p < n; ++p) raw[p] = static_cast<std::uint32_t>(region[comp[p]] + 1);

  SuperpixelLabeling out;
  out.labels = canonicalize(raw);
  const std::uint32_t count = out.labels.max_label();
  out.centers.assign(count, SuperpixelCenter{});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      auto& c = out.centers[out.labels[p] - 1];
      c.x += x;
      c.y += y;
      const float* v = feat.at(p);
      for (int d = 0; d < dims; ++d) c.color[d] += v[d];
      ++c.area;
    }
  }
  for (auto& c : out.centers) {
    c.x /= static_cast<double>(c.area);
    c.y /= static_cast<double>(c.area);
    for (auto& v : c.color) v /= static_cast<double>(c.area);
  }
  return out;
}

}  // namespace vpd
