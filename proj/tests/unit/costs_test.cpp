#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "prefmine/costs.hpp"
#include "prefmine/error.hpp"

namespace prefmine::costs {
namespace {

EdgeAttributes road(double length_km, double estimate_s, std::vector<double> history = {}) {
  EdgeAttributes a;
  a.length_km = length_km;
  a.travel_time_estimate_s = estimate_s;
  a.historical_travel_times_s = std::move(history);
  return a;
}

TEST(DeriveTravelTime, NoHistoryIsEstimate) {
  EXPECT_DOUBLE_EQ(derive_travel_time(road(1.0, 20.0), 10.0), 20.0);
}

TEST(DeriveTravelTime, EqualWeightBlend) {
  EXPECT_DOUBLE_EQ(derive_travel_time(road(1.0, 10.0, std::vector<double>(10, 20.0)), 10.0), 15.0);
  EXPECT_EQ(kDefaultConfidence, 10.0);
}

TEST(DeriveTravelTime, EstimateSlowerThanMinimumSpeedIsClamped) {
  // 1 km at 5 km/h is 720 s.
  EXPECT_DOUBLE_EQ(derive_travel_time(road(1.0, 5000.0)), 720.0);
}

TEST(DeriveTravelTime, MonotoneAndConvergesToHistory) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double est = testing::uniform(rng, 10, 100);
    const double obs = testing::uniform(rng, 10, 100);
    const std::size_t n = testing::below(rng, 20);
    const auto base = derive_travel_time(road(5.0, est, std::vector<double>(n, obs)));
    EXPECT_GE(derive_travel_time(road(5.0, est + 1, std::vector<double>(n, obs))), base);
    EXPECT_GE(derive_travel_time(road(5.0, est, std::vector<double>(n, obs + 1))), base);
  }
  const auto far = derive_travel_time(road(5.0, 10.0, std::vector<double>(100000, 30.0)));
  EXPECT_NEAR(far, 30.0, 0.01);
}

TEST(DeriveCongestion, AtLimitIsZero) {
  auto a = road(1.0, 60.0);
  a.speed_limit_kmh = 60.0;
  EXPECT_DOUBLE_EQ(derive_congestion(a, 60.0), 0.0);
  EXPECT_DOUBLE_EQ(derive_congestion(a, 30.0), 0.0);
}

TEST(DeriveCongestion, TwiceLimitTimeIsHalf) {
  auto a = road(1.0, 60.0);
  a.speed_limit_kmh = 60.0;
  EXPECT_DOUBLE_EQ(derive_congestion(a, 120.0), 0.5);
}

TEST(DeriveCongestion, FallbackLimits) {
  auto a = road(1.3, 60.0);
  a.road_class = RoadClass::Motorway;
  EXPECT_EQ(effective_speed_limit_kmh(a), 130.0);
  EXPECT_DOUBLE_EQ(derive_congestion(a, 72.0), 0.5);
  a.road_class = RoadClass::City;
  EXPECT_EQ(effective_speed_limit_kmh(a), 50.0);
  a.road_class = RoadClass::Other;
  EXPECT_EQ(effective_speed_limit_kmh(a), 80.0);
  a.speed_limit_kmh = 30.0;
  EXPECT_EQ(effective_speed_limit_kmh(a), 30.0);
}

TEST(DeriveCongestion, ZeroLength) {
  EXPECT_THROW(derive_congestion(road(0.0, 10.0), 10.0), ZeroLength);
}

TEST(DeriveCongestion, AlwaysInUnitInterval) {
  testing::Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = road(testing::uniform(rng, 0.01, 10), 10.0);
    a.road_class = static_cast<RoadClass>(testing::below(rng, 3));
    const double c = derive_congestion(a, testing::uniform(rng, 0.1, 5000));
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(ClassifyRoad, MotorwayWinsThenCity) {
  EXPECT_EQ(classify_road(true, true, true), RoadClass::Motorway);
  EXPECT_EQ(classify_road(false, false, true), RoadClass::City);
  EXPECT_EQ(classify_road(false, false, false), RoadClass::Other);
}

TEST(DeriveCrowdedness, SumsCellCounts) {
  std::vector<Point> pts;
  for (int i = 0; i < 3; ++i) pts.push_back({0.0, 0.0});
  for (int i = 0; i < 5; ++i) pts.push_back({1.0, 0.0});
  const std::vector<Point> geometry{{0.1, 0.0}, {0.9, 0.0}};
  EXPECT_EQ(derive_crowdedness(PointSet(pts), 2, 1, geometry), 8.0);
}

TEST(DeriveCrowdedness, SameCellCountsTwice) {
  const std::vector<Point> pts{{0, 0}, {0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}, {1, 1}};
  const std::vector<Point> geometry{{0.05, 0.05}, {0.25, 0.25}};
  const PointSet set(pts);
  CrowdednessGrid grid(set, 2, 2);
  ASSERT_EQ(grid.cell_count({0.0, 0.0}), 4u);
  EXPECT_EQ(derive_crowdedness(set, 2, 2, geometry), 8.0);
}

TEST(DeriveCrowdedness, EmptyPointSetIsZero) {
  const std::vector<Point> geometry{{3, 4}, {5, 6}};
  EXPECT_EQ(derive_crowdedness(PointSet{}, 10, 10, geometry), 0.0);
}

TEST(DeriveCrowdedness, EmptyGeometryThrows) {
  EXPECT_THROW(derive_crowdedness(PointSet{}, 10, 10, {}), EmptyGeometry);
}

TEST(DeriveCrowdedness, AdditiveAndTranslationInvariant) {
  testing::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts(50);
    for (auto& p : pts) p = {testing::uniform(rng, 0, 10), testing::uniform(rng, 0, 10)};
    std::vector<Point> geom(6);
    for (auto& p : geom) p = {testing::uniform(rng, 0, 10), testing::uniform(rng, 0, 10)};
    const PointSet set(pts);
    const double whole = derive_crowdedness(set, 8, 8, geom);
    const double left = derive_crowdedness(set, 8, 8, std::span(geom).first(3));
    const double right = derive_crowdedness(set, 8, 8, std::span(geom).last(3));
    EXPECT_EQ(whole, left + right);
    // Shift by a power of two so cell boundaries map exactly.
    auto shifted = pts;
    for (auto& p : shifted) p = {p.x + 64.0, p.y - 32.0};
    auto shifted_geom = geom;
    for (auto& p : shifted_geom) p = {p.x + 64.0, p.y - 32.0};
    EXPECT_EQ(derive_crowdedness(PointSet(shifted), 8, 8, shifted_geom), whole);
  }
}

TEST(UnitCost, SumsToHopCount) {
  EXPECT_EQ(unit_cost(), 1.0);
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) sum += unit_cost();
  EXPECT_EQ(sum, 7.0);
}

TEST(LoadEdgeAttributes, ParsesRowsAndHeader) {
  std::istringstream in(
      "edge_id,length_km,speed_limit_kmh,road_class,tt_estimate_s,historical_times\n"
      "1,0.5,-,motorway,20,\n"
      "2,1.0,50,city,90,80;100\n");
  const auto rows = load_edge_attributes(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].speed_limit_kmh);
  EXPECT_EQ(rows[0].road_class, RoadClass::Motorway);
  EXPECT_EQ(rows[1].historical_travel_times_s, (std::vector<double>{80, 100}));
  std::istringstream bad("1,0.5,-,highway,20,\n");
  EXPECT_THROW(load_edge_attributes(bad), ParseError);
}

TEST(DeriveCostNetwork, FourNamedDimensionsNormalized) {
  std::istringstream topo("d 1 x\nn 0\nn 1\ne 10 0 1 1\ne 11 1 0 1\n");
  const auto net = load_network(topo);
  std::vector<EdgeAttributes> attrs{road(1.0, 60.0), road(2.0, 200.0)};
  attrs[0].edge_id = 10;
  attrs[1].edge_id = 11;
  attrs[0].geometry_points = {{0, 0}};
  attrs[1].geometry_points = {{1, 1}};
  const PointSet pts(std::vector<Point>{{0, 0}, {1, 1}, {1, 1}});
  const auto out = derive_cost_network(net, attrs, pts);
  EXPECT_EQ(out.cost_names(),
            (std::vector<std::string>{"travel_time", "congestion", "crowdedness", "intersections"}));
  EXPECT_DOUBLE_EQ(out.costs(EdgeId{0})[0], 60.0 / 130.0);
  EXPECT_DOUBLE_EQ(out.costs(EdgeId{0})[2], 1.0 / 1.5);
  EXPECT_EQ(out.costs(EdgeId{1})[3], 1.0);
  attrs.pop_back();
  EXPECT_THROW(derive_cost_network(net, attrs, pts), ValidationError);
}

}  // namespace
}  // namespace prefmine::costs
