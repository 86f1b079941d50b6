#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vpd/accumulator.hpp"
#include "vpd/category_graph.hpp"
#include "vpd/config.hpp"
#include "vpd/error.hpp"
#include "vpd/features.hpp"
#include "vpd/slic.hpp"
#include "vpd/splash.hpp"

namespace vpd {

/// Raised when a pipeline stage fails; stage() names it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct PipelineResult {
  KeypointSet keypoints;
  DescriptorSet descriptors;
  std::vector<Splash> splashes;
  Accumulator accumulator;
  HotspotEdges hotspots;
  SuperpixelLabeling superpixels;
  CategoryGraph graph;
  Partition partition;
  SegmentationResult segmentation;
  std::vector<StageTiming> timings;

  double total_milliseconds() const noexcept;
};

CannyParams canny_params(const PipelineConfig& config);
DaisyParams daisy_params(const PipelineConfig& config);
SlicParams slic_params(const PipelineConfig& config);
/// Gaussian vote sigma: the window spans +-3 sigma.
double vote_sigma(const PipelineConfig& config);

/// Frame the default descriptor radius refers to: 5 MP shelf photographs.
inline constexpr int kReferenceWidth = 2592;
inline constexpr int kReferenceHeight = 1944;

/// `radius` rescaled by the ratio of the image diagonal to the reference
/// diagonal, never below the DAISY ring count.
int scaled_daisy_radius(int radius, int width, int height);

/// `config` with its descriptor radius scaled to a width x height image.
PipelineConfig scaled_to_image(PipelineConfig config, int width, int height);

/// Contour features -> splashes and accumulator -> superpixels -> category
/// graph and corrosion -> mask.
PipelineResult run_pipeline(const Image& img, const PipelineConfig& config);

/// Blends a distinct color per category over the image (RGB, 8-bit range).
Image render_overlay(const Image& img, const LabelMap& mask);

/// Superpixel id of every category pixel, 0 elsewhere.
LabelMap instance_map(const SegmentationResult& seg, const SuperpixelLabeling& sp);

std::string timings_json(const std::vector<StageTiming>& timings);

}  // namespace vpd
