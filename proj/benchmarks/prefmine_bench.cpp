#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "prefmine/preference.hpp"
#include "prefmine/routing.hpp"
#include "prefmine/segmentation.hpp"
#include "prefmine/synth.hpp"

namespace {

using namespace prefmine;

struct Fixture {
  RoadNetwork net;
  std::vector<TrajectoryRecord> planted;
  std::vector<TrajectoryRecord> stitched;
};

const Fixture& fixture(std::size_t side) {
  static std::vector<std::pair<std::size_t, Fixture>> cache;
  for (const auto& [s, f] : cache) {
    if (s == side) return f;
  }
  synth::SynthConfig cfg;
  cfg.grid_w = cfg.grid_h = side;
  cfg.num_trajectories = 32;
  Fixture f{synth::generate_grid_network(cfg), {}, {}};
  f.planted = synth::planted_corpus(f.net, cfg);
  f.stitched = synth::stitched_corpus(f.net, cfg).truth;
  cache.emplace_back(side, std::move(f));
  return cache.back().second;
}

void BM_Dijkstra(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  ShortestPathSearch search(f.net);
  const auto alpha = PreferenceVector::uniform(f.net.cost_dim());
  const NodeId far{static_cast<std::uint32_t>(f.net.num_nodes() - 1)};
  for (auto _ : state) benchmark::DoNotOptimize(search.run(NodeId{0}, far, alpha));
  state.counters["nodes"] = static_cast<double>(f.net.num_nodes());
}
BENCHMARK(BM_Dijkstra)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RecoverPreference(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  ShortestPathSearch search(f.net);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = f.planted[i++ % f.planted.size()].trajectory;
    benchmark::DoNotOptimize(recover_preference(search, t.edges()));
  }
}
BENCHMARK(BM_RecoverPreference)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SegmentPpts(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  SegmentTester tester(f.net, Criterion::personalized_path());
  const auto search = state.range(1) ? PrefixSearch::Galloping : PrefixSearch::Linear;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = f.stitched[i++ % f.stitched.size()].trajectory;
    benchmark::DoNotOptimize(segment(tester, t, search));
  }
}
BENCHMARK(BM_SegmentPpts)->Args({30, 1})->Args({30, 0})->Args({100, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
