#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "vpd/filters.hpp"

namespace vpd::testing {

Image uniform_image(int width, int height, float value, int channels) {
  return Image(width, height, channels,
               std::vector<float>(static_cast<std::size_t>(width) * height * channels, value));
}

Image random_texture(int width, int height, std::uint64_t seed, int channels) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 255.0f);
  std::vector<Plane> planes;
  for (int c = 0; c < channels; ++c) {
    Plane p(width, height);
    for (float& v : p.data) v = u(rng);
    p = gaussian_blur(p, 1.5);
    // Stretch back to the full range so edges are strong.
    const auto [lo, hi] = std::minmax_element(p.data.begin(), p.data.end());
    const float a = *lo, span = std::max(*hi - *lo, 1e-3f);
    for (float& v : p.data) v = (v - a) * 255.0f / span;
    planes.push_back(std::move(p));
  }
  return planes_to_image(planes);
}

Image random_scene(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> color(0.0f, 255.0f);
  std::normal_distribution<float> noise(0.0f, 6.0f);
  Image img(width, height, 3);
  const float base[3] = {color(rng), color(rng), color(rng)};
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = base[c];
  std::uniform_int_distribution<int> rects(3, 12);
  std::uniform_int_distribution<int> px(0, width - 1), py(0, height - 1);
  const int n = rects(rng);
  for (int i = 0; i < n; ++i) {
    int x0 = px(rng), x1 = px(rng), y0 = py(rng), y1 = py(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const float col[3] = {color(rng), color(rng), color(rng)};
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = col[c];
  }
  for (float& v : img.samples()) v = std::clamp(v + noise(rng), 0.0f, 255.0f);
  return img;
}

void paste(Image& dst, const Image& patch, int x0, int y0) {
  for (int y = 0; y < patch.height(); ++y)
    for (int x = 0; x < patch.width(); ++x)
      for (int c = 0; c < dst.channels(); ++c) dst.at(x0 + x, y0 + y, c) = patch.at(x, y, c);
}

Image side_by_side_copy(const Image& left) {
  Image out(2 * left.width(), left.height(), left.channels());
  paste(out, left, 0, 0);
  paste(out, left, left.width(), 0);
  return out;
}

Image white_square() {
  Image img = uniform_image(200, 200, 0.0f);
  for (int y = 70; y < 130; ++y)
    for (int x = 70; x < 130; ++x) img.at(x, y) = 255.0f;
  return img;
}

void paint(LabelMap& map, int x0, int y0, int w, int h, std::uint32_t label) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) map.at(x, y) = label;
}

PatternInstances make_instances(const LabelMap& instance_ids,
                                std::vector<std::uint32_t> pattern_of_instance) {
  PatternInstances p;
  p.width = instance_ids.width();
  p.height = instance_ids.height();
  p.instance_of_pixel.assign(instance_ids.labels().begin(), instance_ids.labels().end());
  p.pattern_of_instance = std::move(pattern_of_instance);
  return p;
}

std::filesystem::path fresh_temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vpd_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace vpd::testing
