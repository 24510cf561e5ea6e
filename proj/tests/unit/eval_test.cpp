#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "prefmine/error.hpp"
#include "prefmine/eval.hpp"

namespace prefmine::eval {
namespace {

using Points = std::vector<std::size_t>;

TEST(Brr, Examples) {
  EXPECT_EQ(brr(Points{3}, Points{3, 7}), 1.0);
  EXPECT_EQ(brr(Points{3, 9}, Points{7}), 0.0);
  EXPECT_EQ(brr(Points{3, 9}, Points{3}), 0.5);
  EXPECT_THROW(brr(Points{}, Points{3}), NoBreakPoints);
}

TEST(Sr, Examples) {
  EXPECT_EQ(sr(Points{3}, Points{3, 7}), 2.0);
  EXPECT_EQ(sr(Points{3}, Points{}), 0.0);
  EXPECT_EQ(sr(Points{1, 2}, Points{1, 2, 3, 4}), 2.0);
  EXPECT_THROW(sr(Points{}, Points{}), NoBreakPoints);
}

TEST(Sq, Examples) {
  // BRR 1, SR 2.
  EXPECT_EQ(sq(Points{3}, Points{3, 7}), 0.5);
  EXPECT_EQ(sq(Points{2, 5}, Points{2, 5}), 1.0);
  EXPECT_EQ(sq(Points{2, 5}, Points{}), 0.0);
}

TEST(SScore, Examples) {
  const bool all[] = {true, true};
  const bool none[] = {false, false};
  const bool most[] = {true, false, true, true};
  EXPECT_EQ(s_score(all), 1.0);
  EXPECT_EQ(s_score(none), 0.0);
  EXPECT_EQ(s_score(most), 0.75);
  EXPECT_EQ(s_score({}), 0.0);
}

RoadNetwork line(std::size_t n) {
  std::ostringstream text;
  text << "d 1 t\n";
  for (std::size_t i = 0; i <= n; ++i) text << "n " << i << "\n";
  for (std::size_t i = 0; i < n; ++i) text << "e " << i << " " << i << " " << i + 1 << " 1\n";
  std::istringstream in(text.str());
  return load_network(in);
}

Trajectory line_traj(const RoadNetwork& net) {
  std::vector<EdgeId> edges;
  for (std::uint32_t i = 0; i < net.num_edges(); ++i) edges.push_back(EdgeId{i});
  return Trajectory(net, edges);
}

TEST(DistanceToNextSp, Examples) {
  const auto net = line(10);
  const auto t = line_traj(net);
  const auto d = distance_to_next_sp(t, Points{4, 6, 9}, Points{4, 7});
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], 0u);
  EXPECT_EQ(d[1], 1u);
  EXPECT_EQ(d[2], 2u);
  const auto inf = distance_to_next_sp(t, Points{4}, Points{});
  EXPECT_FALSE(inf[0]);
}

TEST(DistanceCdf, CountsInfiniteInDenominator) {
  const std::vector<std::optional<std::size_t>> d{0, 1, 1, std::nullopt};
  const auto cdf = distance_cdf(d, 2);
  EXPECT_EQ(cdf, (std::vector<double>{0.25, 0.75, 0.75}));
}

TEST(Rrro, Examples) {
  const std::vector<EdgeId> t{EdgeId{0}, EdgeId{1}, EdgeId{2}, EdgeId{3}};
  EXPECT_EQ(rrro(t, t), 1.0);
  EXPECT_EQ(rrro(t, std::vector<EdgeId>{EdgeId{7}, EdgeId{8}}), 0.0);
  EXPECT_EQ(rrro(t, std::vector<EdgeId>{EdgeId{0}, EdgeId{1}, EdgeId{3}, EdgeId{9}}), 0.75);
}

RoadNetwork diamond() {
  // 0 -> 3 through 1 or 2, both costing (2, 2); plus a 3 -> 4 -> 3 loop.
  std::istringstream in(
      "d 2 a b\nn 0\nn 1\nn 2\nn 3\nn 4\n"
      "e 0 0 1 1 1\ne 1 1 3 1 1\ne 2 0 2 1 1\ne 3 2 3 1 1\ne 4 3 4 1 1\ne 5 4 3 1 1\n");
  return load_network(in);
}

TEST(Rcrs, Examples) {
  const auto net = diamond();
  const auto alpha = PreferenceVector::uniform(2);
  const std::vector<EdgeId> via1{EdgeId{0}, EdgeId{1}};
  const std::vector<EdgeId> via2{EdgeId{2}, EdgeId{3}};
  EXPECT_EQ(rcrs(net, via1, via1, alpha), 1.0);
  EXPECT_EQ(rcrs(net, via2, via1, alpha), 1.0);
  EXPECT_EQ(rrro(via2, via1), 0.0);
  const std::vector<EdgeId> looped{EdgeId{0}, EdgeId{1}, EdgeId{4}, EdgeId{5}};
  const auto looped_pi = std::vector<EdgeId>{EdgeId{0}, EdgeId{1}};
  EXPECT_EQ(rcrs(net, looped, looped_pi, alpha), 0.5);
  EXPECT_THROW(rcrs(net, looped_pi, looped, alpha), NumericalFailure);
}

TEST(ScorePreference, LoopedTrajectory) {
  const auto net = diamond();
  ShortestPathSearch search(net);
  const std::vector<EdgeId> looped{EdgeId{0}, EdgeId{1}, EdgeId{4}, EdgeId{5}};
  Path route;
  const auto s = score_preference(search, looped, PreferenceVector::uniform(2), &route);
  EXPECT_EQ(route.edges, (std::vector<EdgeId>{EdgeId{0}, EdgeId{1}}));
  EXPECT_EQ(s.rrro, 0.5);
  EXPECT_EQ(s.rcrs, 0.5);
}

TEST(ScorePreference, RoundTripScoresZero) {
  const auto net = diamond();
  ShortestPathSearch search(net);
  const std::vector<EdgeId> loop{EdgeId{4}, EdgeId{5}};
  const auto s = score_preference(search, loop, PreferenceVector::uniform(2));
  EXPECT_EQ(s.rrro, 0.0);
  EXPECT_EQ(s.rcrs, 0.0);
}

TEST(TtpPreference, Selector) {
  EXPECT_EQ(ttp_preference(4, 0), PreferenceVector(std::vector<double>{1, 0, 0, 0}));
  EXPECT_THROW(ttp_preference(4, 4), ValidationError);
}

TEST(SampleSimplex, OnSimplex) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto p = sample_simplex(4, rng);
    double sum = 0.0;
    for (double w : p.weights()) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  std::mt19937_64 one(5);
  EXPECT_EQ(sample_simplex(1, one)[0], 1.0);
}

TEST(BrpPreference, ReproducibleAndBestOfCandidates) {
  testing::Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    testing::TinyGraphOptions opts;
    opts.nodes = 7;
    opts.dim = 3;
    const auto net = testing::random_tiny_graph(rng, opts);
    const auto walk = testing::random_walk(net, rng, 4);
    if (walk.empty()) continue;
    ShortestPathSearch search(net);
    for (const auto fn : {EvalFunction::Rrro, EvalFunction::Rcrs}) {
      const auto a = brp_preference(search, walk, fn, 99 + trial);
      const auto b = brp_preference(search, walk, fn, 99 + trial);
      EXPECT_EQ(a.alpha, b.alpha);
      ASSERT_EQ(a.candidates.size(), kBrpCandidates);
      for (std::size_t i = 0; i < kBrpCandidates; ++i) {
        const auto s = score_preference(search, walk, a.candidates[i]);
        const double v = fn == EvalFunction::Rrro ? s.rrro : s.rcrs;
        EXPECT_EQ(v, a.candidate_scores[i]);
        EXPECT_GE(a.score, v);
      }
    }
  }
}

TEST(BrpPreference, SingleDimension) {
  std::istringstream in("d 1 t\nn 0\nn 1\ne 0 0 1 1\n");
  const auto net = load_network(in);
  ShortestPathSearch search(net);
  const std::vector<EdgeId> t{EdgeId{0}};
  EXPECT_EQ(brp_preference(search, t, EvalFunction::Rcrs, 3).alpha[0], 1.0);
}

}  // namespace
}  // namespace prefmine::eval
