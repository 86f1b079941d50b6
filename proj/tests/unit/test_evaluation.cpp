#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vpd/corruption.hpp"
#include "vpd/error.hpp"
#include "vpd/evaluation.hpp"
#include "vpd/synthetic.hpp"

namespace vpd {
namespace {

using testing::make_instances;
using testing::paint;

// Ground truth: label 1 on two 10x10 objects, label 2 on two more, 60x20 canvas.
LabelMap four_objects() {
  LabelMap gt(60, 20);
  paint(gt, 0, 0, 10, 10, 1);
  paint(gt, 20, 0, 10, 10, 1);
  paint(gt, 40, 0, 10, 10, 2);
  paint(gt, 40, 10, 10, 10, 0);
  paint(gt, 0, 10, 10, 10, 2);
  return gt;
}

TEST(Metrics, PerfectSegmentation) {
  const LabelMap gt = four_objects();
  const PatternInstances seg = instances_from_mask(gt);
  EXPECT_EQ(seg.instance_count(), 4u);
  EXPECT_DOUBLE_EQ(mu_consistency(seg, gt), 1.0);
  EXPECT_DOUBLE_EQ(average_best_recall(seg, gt), 1.0);
  EXPECT_DOUBLE_EQ(total_recall(seg, gt), 1.0);
  const ObjectScores o = object_precision_recall(seg, gt);
  EXPECT_DOUBLE_EQ(o.precision, 1.0);
  EXPECT_DOUBLE_EQ(o.recall, 1.0);
  EXPECT_EQ(o.objects, 4u);
}

TEST(Metrics, MixedPatternConsistency) {
  const LabelMap gt = four_objects();
  // One pattern with three instances: two on label 1, one on label 2.
  LabelMap ids(60, 20);
  paint(ids, 0, 0, 10, 10, 1);
  paint(ids, 20, 0, 10, 10, 2);
  paint(ids, 40, 0, 10, 10, 3);
  EXPECT_NEAR(mu_consistency(make_instances(ids, {1, 1, 1}), gt), 2.0 / 3.0, 1e-12);
  // Second pattern, fully consistent: mean of 2/3 and 1.
  paint(ids, 0, 10, 10, 10, 4);
  EXPECT_NEAR(mu_consistency(make_instances(ids, {1, 1, 1, 2}), gt), (2.0 / 3.0 + 1.0) / 2, 1e-12);
  // Instance on background counts towards label 0.
  LabelMap bg(60, 20);
  paint(bg, 0, 0, 10, 10, 1);
  paint(bg, 20, 0, 10, 10, 2);
  paint(bg, 40, 0, 10, 10, 3);
  paint(bg, 52, 2, 6, 6, 4);
  EXPECT_NEAR(mu_consistency(make_instances(bg, {1, 1, 1, 1}), gt), 0.5, 1e-12);
  EXPECT_EQ(mu_consistency(make_instances(LabelMap(60, 20), {}), gt), 0.0);
}

TEST(Metrics, ModalLabelOfAnInstanceDecidesWhatItTouches) {
  const LabelMap gt = four_objects();
  // Instance straddles: 6 columns on label 1, 4 on background.
  LabelMap ids(60, 20);
  paint(ids, 4, 0, 10, 10, 1);
  paint(ids, 20, 0, 10, 10, 2);
  paint(ids, 40, 0, 10, 10, 3);
  paint(ids, 0, 10, 10, 10, 4);
  EXPECT_NEAR(mu_consistency(make_instances(ids, {1, 1, 1, 1}), gt), 0.5, 1e-12);
  const auto d = pattern_details(make_instances(ids, {1, 1, 1, 1}), gt);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].modal_label, 1u);  // tie between labels 1 and 2 goes low
  EXPECT_EQ(d[0].instances, 4u);
}

TEST(Metrics, AverageBestRecall) {
  const LabelMap gt = four_objects();
  LabelMap ids(60, 20);
  // Pattern 1 covers one of the two label-1 objects, nothing on label 2.
  paint(ids, 0, 0, 10, 10, 1);
  EXPECT_NEAR(average_best_recall(make_instances(ids, {1}), gt), (0.5 + 0.0) / 2, 1e-12);
  // Pattern 2 covers half of one label-2 object: best recall 0.25 there.
  paint(ids, 40, 0, 5, 10, 2);
  EXPECT_NEAR(average_best_recall(make_instances(ids, {1, 2}), gt), (0.5 + 0.25) / 2, 1e-12);
  EXPECT_EQ(average_best_recall(make_instances(LabelMap(60, 20), {}), gt), 0.0);
  EXPECT_THROW(average_best_recall(make_instances(ids, {1, 2}), LabelMap(60, 20)), InvalidArgument);
  EXPECT_THROW(average_best_recall(make_instances(LabelMap(5, 5), {}), gt), InvalidArgument);
}

TEST(Metrics, TotalRecallNeedsMostlyInsideInstances) {
  const LabelMap gt = four_objects();
  LabelMap ids(60, 20);
  paint(ids, 0, 0, 10, 10, 1);   // fully inside label 1
  paint(ids, 37, 0, 10, 10, 2);  // 70% inside label 2
  EXPECT_NEAR(total_recall(make_instances(ids, {1, 2}), gt), 0.5, 1e-12);
  EXPECT_NEAR(total_recall(make_instances(ids, {1, 2}), gt, 0.65), 1.0, 1e-12);
  EXPECT_EQ(total_recall(make_instances(LabelMap(60, 20), {}), gt), 0.0);
}

TEST(Metrics, ObjectPrecisionAndRecall) {
  const LabelMap gt = four_objects();
  LabelMap ids(60, 20);
  paint(ids, 1, 1, 8, 8, 1);     // inside an object: hit
  paint(ids, 17, 0, 10, 10, 2);  // 30% outside: miss
  paint(ids, 52, 12, 5, 5, 3);   // on background only
  const ObjectScores o = object_precision_recall(make_instances(ids, {1, 1, 2}), gt);
  EXPECT_EQ(o.instances, 3u);
  EXPECT_EQ(o.true_positives, 1u);
  EXPECT_NEAR(o.precision, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(o.recall, 1.0 / 4.0, 1e-12);
  const ObjectScores none = object_precision_recall(make_instances(LabelMap(60, 20), {}), gt);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
}

TEST(Metrics, InstanceBuilders) {
  LabelMap mask(8, 2);
  paint(mask, 0, 0, 2, 2, 5);
  paint(mask, 4, 0, 2, 2, 5);
  paint(mask, 6, 0, 2, 2, 7);
  const PatternInstances a = instances_from_mask(mask);
  EXPECT_EQ(a.instance_count(), 3u);
  EXPECT_EQ(a.patterns(), (std::vector<std::uint32_t>{5, 7}));

  LabelMap ids(8, 2);
  paint(ids, 0, 0, 2, 2, 40);
  paint(ids, 4, 0, 2, 2, 40);
  paint(ids, 6, 0, 2, 2, 41);
  const PatternInstances b = instances_from_maps(mask, ids);
  EXPECT_EQ(b.instance_count(), 2u);
  paint(ids, 6, 0, 2, 2, 40);
  EXPECT_THROW(instances_from_maps(mask, ids), InvalidArgument);
  paint(ids, 6, 0, 2, 2, 0);
  EXPECT_THROW(instances_from_maps(mask, ids), InvalidArgument);
}

TEST(Metrics, SegmentationInstancesAreSuperpixels) {
  SuperpixelLabeling sp;
  sp.labels = LabelMap(4, 1, {1, 2, 3, 4});
  sp.centers.resize(4);
  SegmentationResult seg{LabelMap(4, 1, {1, 0, 1, 2}), {{1, 3}, {4}}};
  const PatternInstances p = instances_from_segmentation(seg, sp);
  EXPECT_EQ(p.instance_count(), 3u);
  EXPECT_EQ(p.pattern_of_instance, (std::vector<std::uint32_t>{1, 1, 2}));
  EXPECT_EQ(p.instance_of_pixel, (std::vector<std::uint32_t>{1, 0, 2, 3}));
}

// Random blocky ground truth and random blocky segmentations.
struct RandomCase {
  LabelMap gt;
  LabelMap mask;
};

RandomCase random_case(std::mt19937_64& rng) {
  RandomCase c{LabelMap(48, 36), LabelMap(48, 36)};
  for (int i = 0; i < 6; ++i) {
    paint(c.gt, static_cast<int>(rng() % 40), static_cast<int>(rng() % 28), 8, 8,
          1 + static_cast<std::uint32_t>(rng() % 3));
  }
  if (c.gt.max_label() == 0) c.gt.at(0, 0) = 1;
  for (int i = 0; i < 8; ++i) {
    paint(c.mask, static_cast<int>(rng() % 42), static_cast<int>(rng() % 30), 6, 6,
          1 + static_cast<std::uint32_t>(rng() % 4));
  }
  return c;
}

TEST(Metrics, RelabelingTheMaskChangesNothing) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCase c = random_case(rng);
    std::vector<std::uint32_t> perm{0, 11, 7, 3, 900};
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    LabelMap renamed = c.mask;
    for (auto& l : renamed.labels()) l = perm[l];
    const EvalReport a = evaluate(instances_from_mask(c.mask), c.gt);
    const EvalReport b = evaluate(instances_from_mask(renamed), c.gt);
    EXPECT_EQ(a.mu_consistency, b.mu_consistency);
    EXPECT_EQ(a.avg_best_recall, b.avg_best_recall);
    EXPECT_EQ(a.total_recall, b.total_recall);
    EXPECT_EQ(a.object_precision, b.object_precision);
    EXPECT_EQ(a.object_recall, b.object_recall);
    EXPECT_EQ(to_json(a), to_json(b));
  }
}

TEST(Metrics, ScoresStayInTheUnitInterval) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomCase c = random_case(rng);
    const EvalReport r = evaluate(instances_from_mask(c.mask), c.gt);
    for (double v : {r.mu_consistency, r.avg_best_recall, r.total_recall, r.object_precision, r.object_recall}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Metrics, PatternsInsideOneLabelAreFullyConsistent) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCase c = random_case(rng);
    // Every pattern = the GT regions of one label, cut into instances.
    LabelMap mask = c.gt;
    const PatternInstances p = instances_from_mask(mask);
    EXPECT_DOUBLE_EQ(mu_consistency(p, c.gt), 1.0);
    EXPECT_DOUBLE_EQ(average_best_recall(p, c.gt), 1.0);
  }
}

TEST(Metrics, MatchedObjectImpliesItsLabelIsRecalled) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomCase c = random_case(rng);
    const PatternInstances p = instances_from_mask(c.mask);
    const ObjectScores o = object_precision_recall(p, c.gt, 0.2);
    const double tr = total_recall(p, c.gt, 0.8);
    const std::size_t labels = [&] {
      std::set<std::uint32_t> s(c.gt.labels().begin(), c.gt.labels().end());
      s.erase(0);
      return s.size();
    }();
    // A hit lies >= 80% inside one object, so inside that object's label.
    if (o.matched_objects > 0) EXPECT_GE(tr * labels, 1.0 - 1e-12);
    if (tr == 0.0) EXPECT_EQ(o.matched_objects, 0u);
  }
}

TEST(Corruption, ParsesEveryKind) {
  for (CorruptionKind k : all_corruption_kinds()) EXPECT_EQ(parse_corruption_kind(to_string(k)), k);
  EXPECT_EQ(all_corruption_kinds().size(), 4u);
  try {
    parse_corruption_kind("fog");
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("noise, blur, brightness, contrast"), std::string::npos);
  }
}

TEST(Corruption, StrengthsAndRanges) {
  const Image img = testing::random_scene(90, 70, 5);
  for (CorruptionKind k : all_corruption_kinds()) {
    const Image out = corrupt_image(img, k, 3);
    EXPECT_EQ(out.width(), img.width());
    EXPECT_EQ(out.height(), img.height());
    EXPECT_EQ(out.channels(), img.channels());
    for (float v : out.samples()) {
      ASSERT_GE(v, 0.0f);
      ASSERT_LE(v, 255.0f);
    }
    EXPECT_EQ(corrupt_image(img, k, 3), out);
  }
  // Brightness +100 saturates bright pixels.
  EXPECT_EQ(corrupt_image(testing::uniform_image(4, 4, 200), CorruptionKind::Brightness, 0).at(1, 1), 255.0f);
  EXPECT_EQ(corrupt_image(testing::uniform_image(4, 4, 20), CorruptionKind::Brightness, 0).at(1, 1), 120.0f);
  // Contrast 1.5 around mid-gray.
  EXPECT_EQ(corrupt_image(testing::uniform_image(2, 2, 100), CorruptionKind::LinearContrast, 0).at(0, 0), 86.0f);
  CorruptionParams identity;
  identity.contrast_factor = 1.0;
  EXPECT_EQ(corrupt_image(img, CorruptionKind::LinearContrast, 0, identity), img);
  // Blur keeps flat images flat.
  const Image flat = testing::uniform_image(30, 30, 77, 3);
  const Image blurred = corrupt_image(flat, CorruptionKind::GaussianBlur, 0);
  for (float v : blurred.samples()) EXPECT_NEAR(v, 77.0f, 1e-3);
}

TEST(Corruption, NoiseHasTheRequestedSpread) {
  const Image mid = testing::uniform_image(200, 200, 128);
  const Image a = corrupt_image(mid, CorruptionKind::GaussianNoise, 1);
  double sum = 0, sq = 0;
  for (float v : a.samples()) {
    sum += v - 128.0;
    sq += (v - 128.0) * (v - 128.0);
  }
  const double n = static_cast<double>(a.samples().size());
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd, 25.5, 2.55);
  EXPECT_NE(corrupt_image(mid, CorruptionKind::GaussianNoise, 2), a);
}

TEST(Synthetic, DeterministicAndSeedSensitive) {
  SyntheticSpec spec;
  spec.seed = 4;
  const SyntheticScene a = generate_synthetic(spec);
  const SyntheticScene b = generate_synthetic(spec);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.level2, b.level2);
  spec.seed = 5;
  EXPECT_NE(generate_synthetic(spec).image, a.image);
}

TEST(Synthetic, LabelsCountInstancesAndFamilies) {
  SyntheticSpec spec;
  spec.motifs = 4;
  spec.instances = 7;
  spec.seed = 9;
  const SyntheticScene s = generate_synthetic(spec);
  EXPECT_EQ(s.image.width(), 560);
  EXPECT_EQ(s.image.height(), 480);
  EXPECT_EQ(s.image.channels(), 3);
  EXPECT_EQ(s.level2.max_label(), 4u);
  EXPECT_EQ(s.level1.max_label(), 2u);
  for (std::uint32_t m = 1; m <= 4; ++m) {
    EXPECT_EQ(testing::count_regions(s.level2, m), 7) << "motif " << m;
  }
  for (std::size_t p = 0; p < s.level2.size(); ++p) {
    const std::uint32_t l2 = s.level2[p];
    ASSERT_EQ(s.level1[p], l2 == 0 ? 0u : (l2 - 1) / 2 + 1);
  }
  std::size_t area = 0;
  for (auto l : s.level2.labels()) area += l != 0;
  EXPECT_EQ(area, 4u * 7u * 44u * 44u);
}

TEST(Synthetic, RejectsOverfullCanvas) {
  SyntheticSpec spec;
  EXPECT_EQ(spec.capacity(), 42);
  spec.motifs = 5;
  spec.instances = 9;
  EXPECT_THROW(generate_synthetic(spec), InvalidArgument);
  spec.instances = 8;
  EXPECT_NO_THROW(generate_synthetic(spec));
  spec.motif_size = 4;
  EXPECT_THROW(spec.validate(), InvalidArgument);
}

}  // namespace
}  // namespace vpd
