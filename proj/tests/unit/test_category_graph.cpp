#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <random>

#include "oracles.hpp"
#include "vpd/category_graph.hpp"
#include "vpd/error.hpp"

namespace vpd {
namespace {

// Two unit-weight triangles {1,2,3} and {4,5,6} joined by a 0.1 bridge.
CategoryGraph bridged_triangles() {
  return CategoryGraph({}, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}, {4, 5, 1}, {4, 6, 1}, {5, 6, 1}, {3, 4, 0.1}});
}

SuperpixelLabeling strip_superpixels(int count) {
  // Superpixel l covers column l - 1 of a count x 2 image.
  SuperpixelLabeling sp;
  sp.labels = LabelMap(count, 2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < count; ++x) sp.labels.at(x, y) = static_cast<std::uint32_t>(x + 1);
  sp.centers.resize(count);
  return sp;
}

TEST(Graph, ConstructorCanonicalizes) {
  const CategoryGraph g({9}, {{5, 2, 1.5}, {1, 2, 3}});
  EXPECT_EQ(g.nodes(), (std::vector<NodeId>{1, 2, 5, 9}));
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0], (WeightedEdge{1, 2, 3}));
  EXPECT_EQ(g.edges()[1], (WeightedEdge{2, 5, 1.5}));
  EXPECT_EQ(g.min_weight(), 1.5);
  EXPECT_EQ(g.distinct_weights(), 2u);
  EXPECT_THROW(CategoryGraph({}, {{1, 1, 1}}), InvalidArgument);
  EXPECT_THROW(CategoryGraph({}, {{1, 2, 0}}), InvalidArgument);
  EXPECT_THROW(CategoryGraph({}, {{1, 2, 1}, {2, 1, 1}}), InvalidArgument);
  EXPECT_THROW(CategoryGraph().min_weight(), InvalidArgument);
}

TEST(Graph, ComponentsIncludeIsolatedNodes) {
  const CategoryGraph g({7, 8}, {{3, 1, 1}, {4, 5, 2}, {5, 6, 2}});
  EXPECT_EQ(connected_components(g),
            (std::vector<Component>{{1, 3}, {4, 5, 6}, {7}, {8}}));
}

TEST(BuildGraph, CountsEdgesBetweenSuperpixels) {
  const SuperpixelLabeling sp = strip_superpixels(4);
  const KeypointSet kps{{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {3, 0}}};
  // Three edges between superpixels 1 and 2, one inside superpixel 1, one 1-4.
  const HotspotEdges h{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 4}}, 0};
  const CategoryGraph g = build_graph(h, sp, kps);
  EXPECT_EQ(g.nodes(), (std::vector<NodeId>{1, 2, 4}));
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0], (WeightedEdge{1, 2, 3}));
  EXPECT_EQ(g.edges()[1], (WeightedEdge{2, 4, 1}));

  EXPECT_TRUE(build_graph({}, sp, kps).edgeless());
  EXPECT_TRUE(build_graph(HotspotEdges{{{0, 1}}, 0}, sp, kps).nodes().empty());
  EXPECT_THROW(build_graph(HotspotEdges{{{0, 9}}, 0}, sp, kps), InvalidArgument);
}

TEST(Density, HandComputedFixtures) {
  const CategoryGraph g = bridged_triangles();
  EXPECT_NEAR(density_score(g, {{1, 2, 3}, {4, 5, 6}}, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(density_score(g, {{1, 2, 3, 4, 5, 6}}, 0.5), 6.1 / 7 - 0.5, 1e-12);
  EXPECT_NEAR(density_score(g, {{1, 2, 3, 4, 5, 6}}, 0.5), 0.3714285714, 1e-9);
  EXPECT_NEAR(density_score(g, {{1, 2, 3, 4, 5, 6}}, 0.0), 6.1 / 7, 1e-12);
  // Singletons contribute only the penalty.
  EXPECT_NEAR(density_score(g, {{1}, {2}, {3}, {4}, {5}, {6}}, 0.5), -3.0, 1e-12);
}

TEST(Density, AgreesWithHandOracleOnRandomPartitions) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sg = testing::random_small_graph(rng, 8, 12, 5);
    const CategoryGraph g(sg.nodes, sg.edges);
    // Random partition of the nodes into up to 4 groups.
    std::vector<Component> parts(4);
    for (NodeId n : g.nodes()) parts[rng() % 4].push_back(n);
    std::erase_if(parts, [](const Component& c) { return c.empty(); });
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
      ASSERT_NEAR(density_score(g, parts, alpha), testing::hand_density(g.edges(), parts, alpha), 1e-12);
    }
  }
}

TEST(Corrode, SubtractsTheMinimumWeight) {
  const CategoryGraph g({}, {{1, 2, 1}, {2, 3, 3}, {3, 4, 3}});
  const CategoryGraph c = corrode(g);
  EXPECT_EQ(c.nodes(), g.nodes());
  EXPECT_EQ(c.edges(), (std::vector<WeightedEdge>{{2, 3, 2}, {3, 4, 2}}));
  EXPECT_TRUE(corrode(CategoryGraph({}, {{1, 2, 2}, {3, 4, 2}})).edgeless());
  EXPECT_TRUE(corrode(CategoryGraph({}, {{1, 2, 2}})).edgeless());
  EXPECT_EQ(corrode(CategoryGraph({}, {{1, 2, 2}})).nodes().size(), 2u);
}

TEST(Extract, PicksTheTwoTriangles) {
  const Partition p = extract_categories(bridged_triangles(), 0.5);
  EXPECT_EQ(p.components, (std::vector<Component>{{1, 2, 3}, {4, 5, 6}}));
  EXPECT_EQ(p.corrosion_step, 1);
  EXPECT_NEAR(p.score, 0.8, 1e-12);
  EXPECT_EQ(p.steps_evaluated, 3);
}

TEST(Extract, SingleEdgeAndEdgelessGraphs) {
  const Partition single = extract_categories(CategoryGraph({}, {{3, 7, 4}}), 0.5);
  EXPECT_EQ(single.components, (std::vector<Component>{{3, 7}}));
  EXPECT_NEAR(single.score, 3.5, 1e-12);
  EXPECT_EQ(single.corrosion_step, 0);
  EXPECT_TRUE(extract_categories(CategoryGraph({1, 2}, {}), 0.5).empty());
  EXPECT_TRUE(extract_categories(CategoryGraph(), 0.5).empty());
}

TEST(Extract, MatchesExhaustiveReplay) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sg = testing::random_small_graph(rng, 8, 12, 5);
    const CategoryGraph g(sg.nodes, sg.edges);
    for (double alpha : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      const Partition p = extract_categories(g, alpha);
      const auto oracle = testing::replay_corrosion(sg, alpha);
      ASSERT_EQ(p.components, oracle.components) << "trial " << trial << " alpha " << alpha;
      ASSERT_NEAR(p.score, oracle.score, 1e-9);
      ASSERT_EQ(p.corrosion_step, oracle.step);
      ASSERT_EQ(p.steps_evaluated, oracle.steps);
      // Each step removes at least the lightest distinct weight.
      ASSERT_LE(p.steps_evaluated, static_cast<int>(g.distinct_weights()) + 1);
    }
  }
}

TEST(Extract, NodeRelabelingPermutesTheResult) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sg = testing::random_small_graph(rng, 8, 12, 5);
    const CategoryGraph g(sg.nodes, sg.edges);
    std::vector<NodeId> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    std::vector<WeightedEdge> edges;
    for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.weight});
    std::vector<NodeId> nodes;
    for (NodeId n : g.nodes()) nodes.push_back(perm[n]);
    const CategoryGraph h(nodes, edges);
    const Partition a = extract_categories(g, 0.5);
    const Partition b = extract_categories(h, 0.5);
    EXPECT_EQ(a.score, b.score);
    EXPECT_EQ(a.corrosion_step, b.corrosion_step);
    std::vector<Component> mapped;
    for (const auto& c : a.components) {
      Component m;
      for (NodeId n : c) m.push_back(perm[n]);
      std::sort(m.begin(), m.end());
      mapped.push_back(m);
    }
    std::sort(mapped.begin(), mapped.end());
    auto other = b.components;
    std::sort(other.begin(), other.end());
    EXPECT_EQ(mapped, other);
  }
}

TEST(Extract, LargerPenaltyNeverAddsComponents) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sg = testing::random_small_graph(rng, 8, 12, 5);
    const CategoryGraph g(sg.nodes, sg.edges);
    std::size_t last = SIZE_MAX;
    for (double alpha : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      const std::size_t n = extract_categories(g, alpha).components.size();
      EXPECT_LE(n, last) << "trial " << trial << " alpha " << alpha;
      last = n;
    }
  }
}

TEST(Mask, PaintsCategoriesInPartitionOrder) {
  const SuperpixelLabeling sp = strip_superpixels(10);
  EXPECT_TRUE(categories_to_mask(Partition{}, sp).categories.empty());
  EXPECT_EQ(categories_to_mask(Partition{}, sp).mask.max_label(), 0u);

  Partition p;
  p.components = {{1}, {3, 9}, {4, 5, 6}};
  const SegmentationResult r = categories_to_mask(p, sp, 2);
  EXPECT_EQ(r.categories, (std::vector<std::vector<std::uint32_t>>{{3, 9}, {4, 5, 6}}));
  for (int y = 0; y < 2; ++y) {
    const std::vector<std::uint32_t> row{0, 0, 1, 2, 2, 2, 0, 0, 1, 0};
    for (int x = 0; x < 10; ++x) EXPECT_EQ(r.mask.at(x, y), row[x]);
  }
  EXPECT_EQ(categories_to_mask(p, sp, 1).categories.size(), 3u);
  p.components = {{3, 11}};
  EXPECT_THROW(categories_to_mask(p, sp), InvalidArgument);
}

TEST(Report, JsonCarriesPartitionAndCategories) {
  const Partition p = extract_categories(bridged_triangles(), 0.5);
  SuperpixelLabeling sp = strip_superpixels(6);
  const SegmentationResult seg = categories_to_mask(p, sp);
  const auto j = nlohmann::json::parse(partition_report_json(p, seg));
  EXPECT_NEAR(j["score"].get<double>(), 0.8, 1e-12);
  EXPECT_EQ(j["corrosion_step"], 1);
  EXPECT_EQ(j["steps_evaluated"], 3);
  EXPECT_EQ(j["components"].size(), 2u);
  EXPECT_EQ(j["categories"][1]["label"], 2);
  EXPECT_EQ(j["categories"][1]["superpixels"], (std::vector<int>{4, 5, 6}));
}

}  // namespace
}  // namespace vpd
