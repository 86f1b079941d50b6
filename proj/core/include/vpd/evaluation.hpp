#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vpd/category_graph.hpp"
#include "vpd/image.hpp"
#include "vpd/slic.hpp"

namespace vpd {

/// Detected patterns split into instances. Pixel p belongs to instance
/// instance_of_pixel[p] (0 = none); instance i belongs to pattern
/// pattern_of_instance[i - 1].
struct PatternInstances {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> instance_of_pixel;
  std::vector<std::uint32_t> pattern_of_instance;

  std::size_t instance_count() const noexcept { return pattern_of_instance.size(); }
  /// Distinct pattern ids, ascending.
  std::vector<std::uint32_t> patterns() const;
};

/// Every member superpixel of a category is one instance of that pattern.
PatternInstances instances_from_segmentation(const SegmentationResult& seg,
                                             const SuperpixelLabeling& sp);
/// Every 4-connected region of one mask label is an instance of that label.
PatternInstances instances_from_mask(const LabelMap& mask);
/// Instance ids come from `instances` wherever the mask is nonzero.
PatternInstances instances_from_maps(const LabelMap& mask, const LabelMap& instances);

/// Mean over patterns of the modal share of the GT labels their instances
/// touch. An instance touches the GT label (background included) it overlaps
/// most; ties go to the lower label. No patterns gives 0.
double mu_consistency(const PatternInstances& seg, const LabelMap& gt);

/// Mean over nonzero GT labels of the best pixel recall achieved by any
/// single pattern. Throws InvalidArgument when the GT has no labels.
double average_best_recall(const PatternInstances& seg, const LabelMap& gt);

/// Fraction of nonzero GT labels containing at least one instance with
/// `inside_fraction` or more of its area inside that label.
double total_recall(const PatternInstances& seg, const LabelMap& gt, double inside_fraction = 0.8);

struct ObjectScores {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t instances = 0;
  std::size_t objects = 0;
  std::size_t matched_objects = 0;
};

/// GT objects are 4-connected regions of one label. An instance is a hit when
/// at most `outside_fraction` of its area falls outside the object it
/// overlaps most.
ObjectScores object_precision_recall(const PatternInstances& seg, const LabelMap& gt,
                                     double outside_fraction = 0.2);

struct PatternDetail {
  std::uint32_t pattern = 0;
  std::size_t instances = 0;
  std::uint32_t modal_label = 0;
  double consistency = 0.0;
};

struct EvalReport {
  double mu_consistency = 0.0;
  double avg_best_recall = 0.0;
  double total_recall = 0.0;
  double object_precision = 0.0;
  double object_recall = 0.0;
  std::vector<PatternDetail> patterns;
};

EvalReport evaluate(const PatternInstances& seg, const LabelMap& gt);
std::string to_json(const EvalReport& report);

/// Per-instance touched labels grouped by pattern (exposed for reporting).
std::vector<PatternDetail> pattern_details(const PatternInstances& seg, const LabelMap& gt);

}  // namespace vpd
