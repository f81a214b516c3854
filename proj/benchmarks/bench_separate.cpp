// Copyright 2026 The slidesep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <map>

#include "slidesep/memory.hpp"
#include "slidesep/network.hpp"
#include "slidesep/postprocess.hpp"
#include "slidesep/synth.hpp"

namespace {

using namespace slidesep;

// One scene per side length, built on first use.
const SyntheticScene& Scene(int side) {
  static std::map<int, SyntheticScene> cache;
  auto it = cache.find(side);
  if (it == cache.end()) {
    SceneParams p;
    p.height = p.width = side;
    p.n_sections = 8;
    p.size_min = side * 0.07;
    p.size_max = side * 0.12;
    p.min_separation = side * 0.15;
    p.seed = 1;
    it = cache.emplace(side, generate_scene(p)).first;
  }
  return it->second;
}

void BM_Separate(benchmark::State& state) {
  const PredictionBundle b = exact_bundle(Scene(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(separate(b, PostProcessConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(b.tissue_prob.size()));
}
BENCHMARK(BM_Separate)->Arg(1024)->Arg(2048)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SeparateNoisy(benchmark::State& state) {
  const PredictionBundle b = corrupt(Scene(2048), NoiseParams{2, 0, 2, 1, 3});
  for (auto _ : state) benchmark::DoNotOptimize(separate(b, PostProcessConfig{}));
}
BENCHMARK(BM_SeparateNoisy)->Unit(benchmark::kMillisecond);

void BM_Histogram(benchmark::State& state) {
  const SyntheticScene& s = Scene(4096);
  const CentroidMap cmap = build_centroid_map(s.tissue, s.gt_h_dist, s.gt_v_dist);
  for (auto _ : state) benchmark::DoNotOptimize(build_histogram(cmap, 20));
}
BENCHMARK(BM_Histogram)->Unit(benchmark::kMillisecond);

void BM_SmoothAndPeaks(benchmark::State& state) {
  const SyntheticScene& s = Scene(4096);
  const Histogram2D h = build_histogram(build_centroid_map(s.tissue, s.gt_h_dist, s.gt_v_dist), 20);
  for (auto _ : state) {
    const Histogram2D sm = smooth_histogram(h, 2.0);
    benchmark::DoNotOptimize(find_centroids(sm, 15, 98.0));
  }
}
BENCHMARK(BM_SmoothAndPeaks)->Unit(benchmark::kMicrosecond);

void BM_Assign(benchmark::State& state) {
  const SyntheticScene& s = Scene(4096);
  const CentroidMap cmap = build_centroid_map(s.tissue, s.gt_h_dist, s.gt_v_dist);
  const CentroidSet cs(s.centroids.begin(), s.centroids.end());
  for (auto _ : state) benchmark::DoNotOptimize(assign_instances(cmap, cs));
}
BENCHMARK(BM_Assign)->Unit(benchmark::kMillisecond);

void BM_GenerateScene(benchmark::State& state) {
  SceneParams p;
  p.height = p.width = 1152;
  p.n_sections = 4;
  p.size_min = 160;
  p.size_max = 175;
  p.min_separation = 300;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    p.seed = ++seed;
    benchmark::DoNotOptimize(generate_scene(p));
  }
}
BENCHMARK(BM_GenerateScene)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const UNet net(NetworkConfig{}, 1);
  FeatureTensor x(3, 512, 512, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(net.Forward(x));
}
BENCHMARK(BM_Forward)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

int main(int argc, char** argv) {
  slidesep::keep_freed_rasters_mapped();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
