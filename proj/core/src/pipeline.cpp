#include "vpd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

namespace vpd {

namespace {

template <typename Fn>
auto timed(std::vector<StageTiming>& timings, const char* stage, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto result = fn();
    const auto end = std::chrono::steady_clock::now();
    timings.push_back({stage, std::chrono::duration<double, std::milli>(end - start).count()});
    return result;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

double PipelineResult::total_milliseconds() const noexcept {
  double sum = 0.0;
  for (const auto& t : timings) sum += t.milliseconds;
  return sum;
}

CannyParams canny_params(const PipelineConfig& config) {
  return {config.canny_sigma, config.canny_low, config.canny_high};
}

DaisyParams daisy_params(const PipelineConfig& config) {
  DaisyParams p;
  p.radius = config.daisy_radius;
  return p;
}

SlicParams slic_params(const PipelineConfig& config) {
  return {config.superpixel_count, config.compactness, config.slic_iterations};
}

double vote_sigma(const PipelineConfig& config) { return config.vote_window / 6.0; }

int scaled_daisy_radius(int radius, int width, int height) {
  if (radius < 1 || width < 1 || height < 1) throw InvalidArgument("radius and image size must be positive");
  const double ratio = std::hypot(width, height) / std::hypot(kReferenceWidth, kReferenceHeight);
  return std::max(DaisyParams{}.rings, static_cast<int>(std::lround(radius * ratio)));
}

PipelineConfig scaled_to_image(PipelineConfig config, int width, int height) {
  config.daisy_radius = scaled_daisy_radius(config.daisy_radius, width, height);
  return config;
}

PipelineResult run_pipeline(const Image& img, const PipelineConfig& config) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  PipelineResult r;
  auto& t = r.timings;

  r.keypoints = timed(t, "keypoints", [&] {
    return detect_contour_keypoints(img, canny_params(config),
                                    static_cast<std::size_t>(config.keypoint_budget),
                                    config.daisy_radius);
  });
  r.descriptors = timed(t, "descriptors", [&] { return compute_daisy(img, r.keypoints, daisy_params(config)); });
  r.splashes = timed(t, "splashes", [&] {
    return build_splashes(r.descriptors, r.keypoints, config.knn_k, config.exclusion_radius);
  });
  r.accumulator = timed(t, "vote", [&] {
    return vote(r.splashes, img.width(), img.height(), config.vote_window, vote_sigma(config));
  });
  r.hotspots = timed(t, "threshold", [&] {
    return threshold_peaks(r.accumulator, config.tau_mode, config.tau_value);
  });
  r.superpixels = timed(t, "superpixels", [&] { return slic_segment(img, slic_params(config)); });
  r.graph = timed(t, "graph", [&] { return build_graph(r.hotspots, r.superpixels, r.keypoints); });
  r.partition = timed(t, "corrosion", [&] { return extract_categories(r.graph, config.alpha); });
  r.segmentation = timed(t, "mask", [&] {
    return categories_to_mask(r.partition, r.superpixels, config.min_category_nodes);
  });
  return r;
}

Image render_overlay(const Image& img, const LabelMap& mask) {
  const int w = img.width(), h = img.height();
  std::vector<float> out(static_cast<std::size_t>(w) * h * 3);
  const auto src = img.samples();
  const int c = img.channels();
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const std::uint32_t label = mask[p];
    for (int ch = 0; ch < 3; ++ch) {
      const float base = src[p * c + (c == 3 ? ch : 0)];
      if (label == 0) {
        out[3 * p + ch] = base * 0.5f;
        continue;
      }
      // Golden-angle hue walk gives well separated category colors.
      const double hue = std::fmod(label * 137.50776405, 360.0) / 60.0;
      const double x = 1.0 - std::fabs(std::fmod(hue, 2.0) - 1.0);
      const double rgb[6][3] = {{1, x, 0}, {x, 1, 0}, {0, 1, x}, {0, x, 1}, {x, 0, 1}, {1, 0, x}};
      const double color = 255.0 * rgb[static_cast<int>(hue) % 6][ch];
      out[3 * p + ch] = static_cast<float>(0.45 * base + 0.55 * color);
    }
  }
  return Image(w, h, 3, std::move(out));
}

LabelMap instance_map(const SegmentationResult& seg, const SuperpixelLabeling& sp) {
  LabelMap out(sp.labels.width(), sp.labels.height());
  for (std::size_t p = 0; p < out.size(); ++p) {
    if (seg.mask[p] != 0) out[p] = sp.labels[p];
  }
  return out;
}

std::string timings_json(const std::vector<StageTiming>& timings) {
  nlohmann::json j = nlohmann::json::object();
  double total = 0.0;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : timings) {
    stages.push_back({{"stage", s.stage}, {"ms", s.milliseconds}});
    total += s.milliseconds;
  }
  j["stages"] = stages;
  j["total_ms"] = total;
  return j.dump(2) + "\n";
}

}  // namespace vpd
