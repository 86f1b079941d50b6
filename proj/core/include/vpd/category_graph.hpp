#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vpd/accumulator.hpp"
#include "vpd/features.hpp"
#include "vpd/slic.hpp"

namespace vpd {

using NodeId = std::uint32_t;
using Component = std::vector<NodeId>;

struct WeightedEdge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double weight = 0.0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Undirected weighted graph over superpixel labels. Nodes are sorted and
/// unique, edges are sorted by (u, v) with u < v and strictly positive weight.
class CategoryGraph {
 public:
  CategoryGraph() = default;
  /// Validates and canonicalizes; endpoints are added to the node set.
  CategoryGraph(std::vector<NodeId> nodes, std::vector<WeightedEdge> edges);

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  bool edgeless() const noexcept { return edges_.empty(); }
  double min_weight() const;
  /// Number of distinct edge weights.
  std::size_t distinct_weights() const;

  friend bool operator==(const CategoryGraph&, const CategoryGraph&) = default;

 private:
  std::vector<NodeId> nodes_;
  std::vector<WeightedEdge> edges_;
};

/// Connected components over every node (isolated nodes are singletons),
/// each sorted, ordered by smallest member.
std::vector<Component> connected_components(const CategoryGraph& g);

/// One unit of weight between the superpixels holding the origin and the
/// endpoint of each surviving splash edge; pairs inside one superpixel are
/// dropped and only nodes with incident edges are kept.
CategoryGraph build_graph(const HotspotEdges& edges, const SuperpixelLabeling& sp,
                          const KeypointSet& kps);

/// Sum over components of their mean internal edge weight (0 for components
/// without internal edges) minus alpha times the component count.
double density_score(const CategoryGraph& g, const std::vector<Component>& components,
                     double alpha);

/// Subtracts the minimum edge weight from every edge and drops edges that
/// reach zero. The node set is unchanged.
CategoryGraph corrode(const CategoryGraph& g);

struct Partition {
  std::vector<Component> components;
  double score = 0.0;
  int corrosion_step = 0;  // 0 = uncorroded graph
  int steps_evaluated = 0;

  bool empty() const noexcept { return components.empty(); }
};

/// Scores the components of the input graph and of every corroded version
/// until the graph is fully disconnected; returns the best-scoring one
/// (earliest step on ties). Edgeless graphs give an empty partition.
Partition extract_categories(const CategoryGraph& g, double alpha);

/// Category label l (1-based) covers the superpixels in categories[l - 1].
struct SegmentationResult {
  LabelMap mask;
  std::vector<std::vector<std::uint32_t>> categories;
};

/// Components with at least `min_nodes` nodes become categories 1.. in
/// partition order; their superpixels are painted with the category label.
SegmentationResult categories_to_mask(const Partition& p, const SuperpixelLabeling& sp,
                                      int min_nodes = 2);

/// JSON report: score, step, components, and per-category superpixel ids.
std::string partition_report_json(const Partition& p, const SegmentationResult& seg);

}  // namespace vpd
