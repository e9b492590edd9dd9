#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "textanchor/decode.hpp"
#include "textanchor/polyiou.hpp"
#include "textanchor/targets.hpp"

using namespace textanchor;

namespace {

std::vector<RotatedBox> boxes(std::size_t count, double extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RotatedBox> out;
  for (std::size_t n = 0; n < count; ++n) {
    const double w = 16 + 200 * u(rng);
    out.emplace_back(extent * u(rng), extent * u(rng), w, w * (0.1 + 0.8 * u(rng)), -kHalfPi + kPi * u(rng));
  }
  return out;
}

void BM_IouPair(benchmark::State& state) {
  const auto b = boxes(1024, 200, 1);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iou(b[k % 1024], b[(k * 7 + 1) % 1024]));
    ++k;
  }
}
BENCHMARK(BM_IouPair);

void BM_IouMatrix(benchmark::State& state) {
  const auto a = boxes(static_cast<std::size_t>(state.range(0)), 1000, 2);
  const auto b = boxes(static_cast<std::size_t>(state.range(0)), 1000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(iou_matrix(a, b, static_cast<unsigned>(state.range(1))));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_IouMatrix)->Args({256, 1})->Args({256, 4})->UseRealTime();

void BM_IouOracle(benchmark::State& state) {
  const auto b = boxes(2, 100, 4);
  for (auto _ : state) benchmark::DoNotOptimize(iou_oracle(b[0], b[1], 1'000'000, 7));
}
BENCHMARK(BM_IouOracle)->Unit(benchmark::kMillisecond);

void BM_PolygonNms(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Proposal> props;
  for (const auto& b : boxes(static_cast<std::size_t>(state.range(0)), 1000, 6)) props.push_back({b, u(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(polygon_nms(props, 0.3));
}
BENCHMARK(BM_PolygonNms)->Arg(300)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_GenerateTargets(benchmark::State& state) {
  const std::vector<int> strides = {4, 8, 16, 32};
  const std::vector<int> long_strides = {4, 8};
  const auto levels = make_levels(1333, 800, strides, 5.0, long_strides);
  const auto gts = boxes(static_cast<std::size_t>(state.range(0)), 700, 8);
  for (auto _ : state) benchmark::DoNotOptimize(generate_targets(gts, levels, {}, {}));
}
BENCHMARK(BM_GenerateTargets)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DecodeAnchors(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PredictionMaps maps(LevelSpec{4, 5.0, 334, 200, true});
  for (double& p : maps.location_prob.values()) p = u(rng) < 0.05 ? u(rng) : 0.0;
  for (double& o : maps.orientation.values()) o = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(decode_anchors(maps, {}));
}
BENCHMARK(BM_DecodeAnchors)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
