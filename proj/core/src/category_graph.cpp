#include "vpd/category_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vpd/error.hpp"

namespace vpd {

namespace {

constexpr double kCorrodedZero = 1e-12;
constexpr double kScoreTieTolerance = 1e-9;

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

CategoryGraph::CategoryGraph(std::vector<NodeId> nodes, std::vector<WeightedEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u == e.v) throw InvalidArgument("category graph cannot contain self-loops");
    if (!(e.weight > 0)) throw InvalidArgument("category graph edge weights must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
    nodes_.push_back(e.u);
    nodes_.push_back(e.v);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      throw InvalidArgument("category graph cannot contain parallel edges");
    }
  }
}

double CategoryGraph::min_weight() const {
  if (edges_.empty()) throw InvalidArgument("edgeless graph has no minimum weight");
  double m = edges_.front().weight;
  for (const auto& e : edges_) m = std::min(m, e.weight);
  return m;
}

std::size_t CategoryGraph::distinct_weights() const {
  std::set<double> w;
  for (const auto& e : edges_) w.insert(e.weight);
  return w.size();
}

std::vector<Component> connected_components(const CategoryGraph& g) {
  const auto& nodes = g.nodes();
  auto index_of = [&](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  DisjointSet ds(nodes.size());
  for (const auto& e : g.edges()) ds.unite(index_of(e.u), index_of(e.v));
  // Roots are the smallest index of each set, so visiting in node order
  // yields components ordered by smallest member.
  std::map<std::size_t, Component> groups;
  for (std::size_t i = 0; i < nodes.size(); ++i) groups[ds.find(i)].push_back(nodes[i]);
  std::vector<Component> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

CategoryGraph build_graph(const HotspotEdges& edges, const SuperpixelLabeling& sp,
                          const KeypointSet& kps) {
  std::map<std::pair<NodeId, NodeId>, double> weights;
  for (const auto& [origin, endpoint] : edges.edges) {
    if (origin >= kps.size() || endpoint >= kps.size()) {
      throw InvalidArgument("hotspot edge references keypoint outside the keypoint set");
    }
    const Point a = kps[origin];
    const Point b = kps[endpoint];
    NodeId la = sp.labels.at(a.x, a.y);
    NodeId lb = sp.labels.at(b.x, b.y);
    if (la == lb) continue;
    if (la > lb) std::swap(la, lb);
    weights[{la, lb}] += 1.0;
  }
  std::vector<WeightedEdge> out;
  out.reserve(weights.size());
  for (const auto& [key, w] : weights) out.push_back({key.first, key.second, w});
  return CategoryGraph({}, std::move(out));
}

double density_score(const CategoryGraph& g, const std::vector<Component>& components,
                     double alpha) {
  std::unordered_map<NodeId, std::size_t> owner;
  for (std::size_t k = 0; k < components.size(); ++k) {
    for (NodeId n : components[k]) owner[n] = k;
  }
  std::vector<double> weight_sum(components.size(), 0.0);
  std::vector<std::size_t> edge_count(components.size(), 0);
  for (const auto& e : g.edges()) {
    const auto iu = owner.find(e.u);
    const auto iv = owner.find(e.v);
    if (iu == owner.end() || iv == owner.end() || iu->second != iv->second) continue;
    weight_sum[iu->second] += e.weight;
    ++edge_count[iu->second];
  }
  double score = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (edge_count[k] > 0) score += weight_sum[k] / static_cast<double>(edge_count[k]);
  }
  return score - alpha * static_cast<double>(components.size());
}

CategoryGraph corrode(const CategoryGraph& g) {
  const double m = g.min_weight();
  std::vector<WeightedEdge> kept;
  kept.reserve(g.edges().size());
  for (auto e : g.edges()) {
    e.weight -= m;
    if (e.weight > kCorrodedZero) kept.push_back(e);
  }
  return CategoryGraph(g.nodes(), std::move(kept));
}

Partition extract_categories(const CategoryGraph& g, double alpha) {
  Partition best;
  if (g.edgeless()) return best;

  best.components = connected_components(g);
  best.score = density_score(g, best.components, alpha);
  best.corrosion_step = 0;

  CategoryGraph current = g;
  int step = 0;
  while (!current.edgeless()) {
    current = corrode(current);
    ++step;
    auto components = connected_components(current);
    const double s = density_score(current, components, alpha);
    // Scores closer than rounding noise are ties, which the earlier step wins.
    if (s > best.score + kScoreTieTolerance * std::max(1.0, std::abs(best.score))) {
      best.score = s;
      best.components = std::move(components);
      best.corrosion_step = step;
    }
  }
  best.steps_evaluated = step + 1;
  return best;
}

SegmentationResult categories_to_mask(const Partition& p, const SuperpixelLabeling& sp,
                                      int min_nodes) {
  SegmentationResult out;
  out.mask = LabelMap(sp.labels.width(), sp.labels.height());
  std::vector<std::uint32_t> category_of(static_cast<std::size_t>(sp.count()) + 1, 0);
  for (const auto& comp : p.components) {
    if (static_cast<int>(comp.size()) < min_nodes) continue;
    out.categories.push_back(comp);
    const auto label = static_cast<std::uint32_t>(out.categories.size());
    for (NodeId n : comp) {
      if (n == 0 || n > static_cast<NodeId>(sp.count())) {
        throw InvalidArgument("partition node " + std::to_string(n) +
                              " is not a superpixel label");
      }
      category_of[n] = label;
    }
  }
  for (std::size_t i = 0; i < out.mask.size(); ++i) out.mask[i] = category_of[sp.labels[i]];
  return out;
}

std::string partition_report_json(const Partition& p, const SegmentationResult& seg) {
  nlohmann::json j;
  j["score"] = p.score;
  j["corrosion_step"] = p.corrosion_step;
  j["steps_evaluated"] = p.steps_evaluated;
  j["components"] = p.components;
  nlohmann::json cats = nlohmann::json::array();
  for (std::size_t i = 0; i < seg.categories.size(); ++i) {
    cats.push_back({{"label", i + 1}, {"superpixels", seg.categories[i]}});
  }
  j["categories"] = cats;
  return j.dump(2) + "\n";
}

}  // namespace vpd
