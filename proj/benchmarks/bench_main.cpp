#include <benchmark/benchmark.h>

#include <string>

#include "multitile/asymptotics.hpp"
#include "multitile/flow.hpp"
#include "multitile/graph.hpp"
#include "multitile/statistics.hpp"

using namespace multitile;

namespace {

const Scheme& load(const std::string& name) {
  static const Scheme square = load_scheme(std::string(MULTITILE_SCHEME_DIR) + "/square.json");
  static const Scheme triangles = load_scheme(std::string(MULTITILE_SCHEME_DIR) + "/triangles.json");
  return name == "square" ? square : triangles;
}

// state.range(0) is u; patch size grows like u^2.
void BM_GenerateSquare(benchmark::State& state) {
  const Scheme& s = load("square");
  GenerateOptions options;
  options.workers = static_cast<unsigned>(state.range(1));
  std::size_t tiles = 0;
  for (auto _ : state) {
    const Patch p = generate(s, 0, TimePoint::exact(Rational(state.range(0))), options);
    tiles = p.tiles.size();
    benchmark::DoNotOptimize(tiles);
  }
  state.counters["tiles"] = static_cast<double>(tiles);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tiles));
}
BENCHMARK(BM_GenerateSquare)->Args({20, 1})->Args({60, 1})->Args({60, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SpectrumTriangles(benchmark::State& state) {
  const Scheme& s = load("triangles");
  const TimePoint t = TimePoint::exact(Rational(5).pow(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scale_spectrum(s, 0, t).distinct());
}
BENCHMARK(BM_SpectrumTriangles)->DenseRange(4, 12, 4);

void BM_ComputeQ(benchmark::State& state) {
  const Scheme& s = load("triangles");
  for (auto _ : state) benchmark::DoNotOptimize(compute_Q(s).denominator.is_zero());
}
BENCHMARK(BM_ComputeQ);

void BM_ClassifySquare(benchmark::State& state) {
  const SubstGraph g = build_graph(load("square"));
  for (auto _ : state) benchmark::DoNotOptimize(classify_commensurability(g).rank);
}
BENCHMARK(BM_ClassifySquare);

void BM_Complexity(benchmark::State& state) {
  const Scheme& s = load("square");
  const auto anchors = find_stationary_anchors(s, 0, TimePoint::exact(25));
  for (auto _ : state) benchmark::DoNotOptimize(complexity(s, anchors.front(), static_cast<int>(state.range(0))).c);
}
BENCHMARK(BM_Complexity)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
