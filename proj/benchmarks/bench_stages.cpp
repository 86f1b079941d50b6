#include <benchmark/benchmark.h>

#include <random>

#include "vpd/accumulator.hpp"
#include "vpd/category_graph.hpp"
#include "vpd/features.hpp"
#include "vpd/slic.hpp"
#include "vpd/splash.hpp"
#include "vpd/synthetic.hpp"

namespace {

using namespace vpd;

const Image& scene() {
  static const Image img = [] {
    SyntheticSpec spec;
    spec.width = 640;
    spec.height = 480;
    spec.motifs = 4;
    spec.seed = 7;
    return generate_synthetic(spec).image;
  }();
  return img;
}

struct Features {
  KeypointSet kps;
  DescriptorSet desc;
};

Features features(std::size_t budget) {
  Features f;
  f.kps = detect_contour_keypoints(scene(), {}, budget, 30);
  f.desc = compute_daisy(scene(), f.kps, {});
  return f;
}

void BM_Canny(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(canny_edges(scene(), {}));
}
BENCHMARK(BM_Canny)->Unit(benchmark::kMillisecond);

void BM_Daisy(benchmark::State& state) {
  const KeypointSet kps = detect_contour_keypoints(scene(), {}, static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(compute_daisy(scene(), kps, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kps.size()));
}
BENCHMARK(BM_Daisy)->Arg(1000)->Arg(9000)->Unit(benchmark::kMillisecond);

void BM_Knn(benchmark::State& state) {
  const Features f = features(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_splashes(f.desc, f.kps, 15, 10.0));
  state.counters["keypoints"] = static_cast<double>(f.kps.size());
}
BENCHMARK(BM_Knn)->Arg(2000)->Arg(9000)->Unit(benchmark::kMillisecond);

void BM_Vote(benchmark::State& state) {
  const Features f = features(9000);
  const auto splashes = build_splashes(f.desc, f.kps, 15, 10.0);
  for (auto _ : state) {
    const Accumulator acc = vote(splashes, scene().width(), scene().height(), 11, 11 / 6.0);
    benchmark::DoNotOptimize(threshold_peaks(acc, TauMode::Relative, 0.05));
  }
}
BENCHMARK(BM_Vote)->Unit(benchmark::kMillisecond);

void BM_Slic(benchmark::State& state) {
  const SlicParams p{static_cast<int>(state.range(0)), 10.0, 10};
  for (auto _ : state) benchmark::DoNotOptimize(slic_segment(scene(), p));
}
BENCHMARK(BM_Slic)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Corrosion(benchmark::State& state) {
  // Dense random graph over |P| superpixels with integer vote counts.
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> w(1, 60);
  std::vector<WeightedEdge> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (rng() % 8 == 0) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<double>(w(rng))});
  const CategoryGraph g({}, edges);
  for (auto _ : state) benchmark::DoNotOptimize(extract_categories(g, 0.5));
}
BENCHMARK(BM_Corrosion)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
