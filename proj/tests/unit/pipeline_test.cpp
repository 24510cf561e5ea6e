#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "prefmine/error.hpp"
#include "prefmine/pipeline.hpp"
#include "prefmine/synth.hpp"

namespace prefmine::pipeline {
namespace {

TEST(ParallelMap, IndexOrder) {
  for (std::size_t workers : {1u, 3u, 8u}) {
    const auto out = parallel_map(
        100, workers, [] { return 0; }, [](int&, std::size_t i) { return i * i; });
    ASSERT_EQ(out.size(), 100u);
    for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
  }
}

TEST(ParallelMap, LowestIndexExceptionWins) {
  auto run = [](std::size_t workers) {
    try {
      parallel_map(
          50, workers, [] { return 0; },
          [](int&, std::size_t i) -> int {
            if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
            return 0;
          });
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(run(1), "7");
  EXPECT_EQ(run(4), "7");
}

TEST(OracleEpsilon, FromEnvironment) {
  ::unsetenv("PREFMINE_EPS");
  EXPECT_EQ(oracle_epsilon_from_env(), kOracleTolerance);
  ::setenv("PREFMINE_EPS", "1e-4", 1);
  EXPECT_EQ(oracle_epsilon_from_env(), 1e-4);
  ::setenv("PREFMINE_EPS", "-1", 1);
  EXPECT_THROW(oracle_epsilon_from_env(), ValidationError);
  ::setenv("PREFMINE_EPS", "abc", 1);
  EXPECT_THROW(oracle_epsilon_from_env(), ValidationError);
  ::unsetenv("PREFMINE_EPS");
}

TEST(ParseAlgorithms, Labels) {
  synth::SynthConfig cfg;
  cfg.grid_w = cfg.grid_h = 2;
  const auto net = synth::generate_grid_network(cfg);
  const auto all = parse_algorithms("all", net);
  std::vector<std::string> labels;
  for (const auto& a : all) labels.push_back(a.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"ppts", "opts:travel_time", "opts:congestion",
                                              "opts:crowdedness", "opts:intersections", "rdp",
                                              "ttp", "brp"}));
  EXPECT_EQ(parse_algorithm("ttp:congestion", net).cost_index, 1u);
  EXPECT_THROW(parse_algorithm("bogus", net), ValidationError);
  EXPECT_THROW(parse_format("xml"), ValidationError);
}

struct Corpus {
  RoadNetwork net;
  std::vector<TrajectoryRecord> trajs;
};

Corpus small_corpus() {
  synth::SynthConfig cfg;
  cfg.grid_w = cfg.grid_h = 7;
  cfg.num_trajectories = 12;
  auto net = synth::generate_grid_network(cfg);
  auto st = synth::stitched_corpus(net, cfg);
  return {std::move(net), std::move(st.truth)};
}

TEST(RunSegment, WorkerCountDoesNotChangeOutput) {
  const auto c = small_corpus();
  const auto algos = parse_algorithms("ppts,opts:travel_time", c.net);
  std::string previous;
  for (std::size_t workers : {1u, 2u, 5u}) {
    RunOptions opts;
    opts.workers = workers;
    const auto recs = run_segment(c.net, c.trajs, algos, opts);
    ASSERT_EQ(recs.size(), c.trajs.size() * algos.size());
    std::ostringstream out;
    write_segment_records(out, recs, OutputFormat::Jsonl, false);
    out << segment_summary_json(recs, algos);
    if (!previous.empty()) EXPECT_EQ(out.str(), previous);
    previous = out.str();
  }
}

TEST(RunMine, WorkerCountDoesNotChangeOutput) {
  const auto c = small_corpus();
  const auto algos = parse_algorithms("rdp,ttp,brp", c.net);
  std::string previous;
  for (std::size_t workers : {1u, 3u}) {
    RunOptions opts;
    opts.workers = workers;
    const auto recs = run_mine(c.net, c.trajs, algos, opts);
    std::ostringstream out;
    write_mine_records(out, recs, OutputFormat::Csv, false);
    out << mine_summary_json(recs, algos);
    if (!previous.empty()) EXPECT_EQ(out.str(), previous);
    previous = out.str();
  }
}

TEST(RunSegment, EmptyInput) {
  const auto c = small_corpus();
  const auto algos = parse_algorithms("ppts", c.net);
  const auto recs = run_segment(c.net, {}, algos, {});
  EXPECT_TRUE(recs.empty());
  std::ostringstream out;
  write_segment_records(out, recs, OutputFormat::Csv, false);
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(BrpSeed, DependsOnTrajectoryAndFunction) {
  EXPECT_EQ(brp_seed(1, 4, eval::EvalFunction::Rrro), brp_seed(1, 4, eval::EvalFunction::Rrro));
  EXPECT_NE(brp_seed(1, 4, eval::EvalFunction::Rrro), brp_seed(1, 4, eval::EvalFunction::Rcrs));
  EXPECT_NE(brp_seed(1, 4, eval::EvalFunction::Rrro), brp_seed(1, 5, eval::EvalFunction::Rrro));
}

TEST(LatencyStats, Percentiles) {
  std::vector<double> xs;
  for (int i = 1; i <= 100; ++i) xs.push_back(i);
  const auto s = latency_stats(xs);
  EXPECT_DOUBLE_EQ(s.mean, 50.5);
  EXPECT_EQ(s.median, 50.0);
  EXPECT_EQ(s.p99, 99.0);
  EXPECT_EQ(latency_stats({}).mean, 0.0);
}

}  // namespace
}  // namespace prefmine::pipeline
