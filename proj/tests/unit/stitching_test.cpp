#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "prefmine/error.hpp"
#include "prefmine/stitching.hpp"

namespace prefmine {
namespace {

using testing::timed;

class StitchTraceTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(StitchTraceTest, MatchesHandTrace) {
  const auto net = testing::stitch_chain_network();
  const auto traces = testing::stitch_traces(net);
  const auto& trace = traces.at(GetParam());
  EXPECT_EQ(testing::check_stitch_trace(net, trace), "") << trace.name;
}

INSTANTIATE_TEST_SUITE_P(Traces, StitchTraceTest, ::testing::Values(0, 1, 2));

TEST(StitchAll, ChainTracksLastEndTimeAndSources) {
  const auto net = testing::stitch_chain_network();
  const auto trace = testing::stitch_traces(net)[2];
  const auto out = stitch_all(net, trace.trips);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].source_ids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(out[0].stitch_edges, (std::vector<std::size_t>{1}));
  EXPECT_EQ(out[0].id, "a");
}

TEST(PseudoConnected, SharedEndpointIsEmptyConnector) {
  const auto net = testing::stitch_chain_network();
  const auto c = pseudo_connected(net, timed(net, "a", "v", {10}, 0, 1).trajectory,
                                  timed(net, "b", "v", {11}, 0, 1).trajectory);
  ASSERT_TRUE(c);
  EXPECT_TRUE(c->empty());
}

TEST(PseudoConnected, ShortSingleEdge) {
  const auto net = testing::stitch_chain_network();
  const auto c = pseudo_connected(net, timed(net, "a", "v", {10}, 0, 1).trajectory,
                                  timed(net, "b", "v", {12}, 0, 1).trajectory);
  ASSERT_TRUE(c);
  ASSERT_EQ(c->hops(), 1u);
  EXPECT_EQ(net.edge_label(c->edges[0]), 11);
}

TEST(PseudoConnected, LongMultiEdgeRouteRejected) {
  const auto net = testing::stitch_chain_network();
  // 4 -> 7 takes three 300 m edges.
  EXPECT_FALSE(pseudo_connected(net, timed(net, "a", "v", {13}, 0, 1).trajectory,
                                timed(net, "b", "v", {17}, 0, 1).trajectory));
}

TEST(PseudoConnected, LongSingleEdgeAccepted) {
  const auto net = testing::stitch_chain_network();
  // One 500 m edge (2 -> 3) still counts through the hop condition.
  EXPECT_TRUE(pseudo_connected(net, timed(net, "a", "v", {11}, 0, 1).trajectory,
                               timed(net, "b", "v", {13}, 0, 1).trajectory));
}

TEST(PseudoConnected, ShortTwoEdgeRouteAccepted) {
  const auto net = testing::stitch_chain_network();
  StitchConfig cfg;
  cfg.len_max_m = 700;
  // 1 -> 3 is 150 + 500 = 650 m.
  const auto c = pseudo_connected(net, timed(net, "a", "v", {10}, 0, 1).trajectory,
                                  timed(net, "b", "v", {13}, 0, 1).trajectory, cfg);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->hops(), 2u);
  cfg.len_max_m = 650;
  EXPECT_FALSE(pseudo_connected(net, timed(net, "a", "v", {10}, 0, 1).trajectory,
                                timed(net, "b", "v", {13}, 0, 1).trajectory, cfg));
}

TEST(PseudoConnected, LengthUsesCostScales) {
  const auto plain = testing::stitch_chain_network();
  const auto net = normalize_costs(plain);
  StitchConfig cfg;
  cfg.len_max_m = 700;
  EXPECT_TRUE(pseudo_connected(net, timed(net, "a", "v", {10}, 0, 1).trajectory,
                               timed(net, "b", "v", {13}, 0, 1).trajectory, cfg));
}

TEST(StitchVehicle, UnsortedInputThrows) {
  const auto net = testing::stitch_chain_network();
  const std::vector<TimedTrajectory> trips{timed(net, "a", "v", {10}, 500, 600),
                                           timed(net, "b", "v", {11}, 100, 200)};
  ShortestPathSearch search(net);
  EXPECT_THROW(stitch_vehicle(search, trips), UnsortedInput);
  EXPECT_THROW(stitch_all(net, trips), UnsortedInput);
}

TEST(StitchAll, VehiclesNeverMixAndOrderFollowsInput) {
  const auto net = testing::stitch_chain_network();
  const std::vector<TimedTrajectory> trips{
      timed(net, "x1", "x", {10}, 0, 60), timed(net, "y1", "y", {12}, 10, 70),
      timed(net, "x2", "x", {11}, 100, 160), timed(net, "y2", "y", {15}, 100, 160)};
  const auto out = stitch_all(net, trips);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].source_ids, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(out[1].source_ids, (std::vector<std::string>{"y1"}));
  EXPECT_EQ(out[2].source_ids, (std::vector<std::string>{"y2"}));
}

TEST(StitchAll, TimestampsMergeAcrossConnector) {
  const auto net = testing::stitch_chain_network();
  std::vector<TimedTrajectory> trips{timed(net, "a", "v", {10}, 0, 60),
                                     timed(net, "b", "v", {12}, 100, 160)};
  trips[0].trajectory = Trajectory(net, {*net.find_edge(10)}, {}, std::vector<double>{0});
  trips[1].trajectory = Trajectory(net, {*net.find_edge(12)}, {}, std::vector<double>{100});
  const auto out = stitch_all(net, trips);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(*out[0].trajectory.timestamps(), (std::vector<double>{0, 100, 100}));
}

TEST(StitchAll, ConservationOnRandomHistories) {
  testing::Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    testing::TinyGraphOptions opts;
    opts.nodes = 4 + testing::below(rng, 6);
    const auto net = testing::random_tiny_graph(rng, opts);
    const auto trips = testing::random_vehicle_history(net, rng, 1 + testing::below(rng, 3),
                                                       2 + testing::below(rng, 10));
    StitchConfig cfg;
    cfg.gap_max_s = testing::uniform(rng, 0, 3600);
    const auto out = stitch_all(net, trips, cfg);
    EXPECT_EQ(testing::check_stitch_conservation(net, trips, out), "") << "trial " << trial;
  }
}

TEST(TimedTrajectories, RequiresMeta) {
  const auto net = testing::stitch_chain_network();
  std::vector<TrajectoryRecord> recs(1);
  recs[0].id = "a";
  recs[0].trajectory = Trajectory(net, {*net.find_edge(10)});
  EXPECT_THROW(timed_trajectories(recs), ValidationError);
  recs[0].meta = TripMeta{"v", 1, 2};
  const auto t = timed_trajectories(recs);
  EXPECT_EQ(t[0].vehicle_id, "v");
  EXPECT_EQ(t[0].end_time, 2.0);
}

}  // namespace
}  // namespace prefmine
