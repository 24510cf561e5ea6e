#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefmine/graph.hpp"

namespace prefmine::costs {

/// Confidence in the model estimate when blending it with observed traversals.
inline constexpr double kDefaultConfidence = 10.0;
/// Estimated driving speed never drops below this.
inline constexpr double kMinEstimatedSpeedKmh = 5.0;
inline constexpr std::size_t kDefaultGridSize = 2000;

enum class RoadClass { Motorway, City, Other };

/// Motorway wins; otherwise an edge is City when either endpoint is in a city.
RoadClass classify_road(bool is_motorway, bool source_in_city, bool target_in_city);

/// Fallback speed limit by road class: 130 / 50 / 80 km/h.
double default_speed_limit_kmh(RoadClass road_class);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct EdgeAttributes {
  std::int64_t edge_id = 0;
  double length_km = 0.0;
  std::optional<double> speed_limit_kmh;
  RoadClass road_class = RoadClass::Other;
  /// Model estimate of the mean travel time, seconds.
  double travel_time_estimate_s = 0.0;
  /// Observed traversal times, seconds; the count is n, the mean is t-bar.
  std::vector<double> historical_travel_times_s;
  std::vector<Point> geometry_points;
};

/// Travel-time estimate after enforcing the minimum estimated speed.
double clamped_estimate_s(const EdgeAttributes& attrs);

/// t_e = (k * t_hat + n * t_bar) / (k + n). With no history this is t_hat.
double derive_travel_time(const EdgeAttributes& attrs, double confidence_k = kDefaultConfidence);

/// Speed limit in km/h, falling back to the road-class default.
double effective_speed_limit_kmh(const EdgeAttributes& attrs);

/// max{1 - tau_e / t_e, 0} with tau_e the travel time at the speed limit;
/// 0 means free flow, values near 1 mean barely traversable. Throws ZeroLength.
double derive_congestion(const EdgeAttributes& attrs, double travel_time_s);

/// Point set with its bounding box.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points);

  std::span<const Point> points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  Point min() const noexcept { return min_; }
  Point max() const noexcept { return max_; }

 private:
  std::vector<Point> points_;
  Point min_{};
  Point max_{};
};

/// Per-cell point counts over a grid laid across a point set's bounding box.
class CrowdednessGrid {
 public:
  CrowdednessGrid(const PointSet& points, std::size_t grid_w = kDefaultGridSize,
                  std::size_t grid_h = kDefaultGridSize);

  /// Count of the cell containing `p` (clamped into the box).
  std::uint32_t cell_count(Point p) const;
  /// Sum of cell counts over the geometry points; a cell is counted once per
  /// point that lands in it. Throws EmptyGeometry.
  double edge_crowdedness(std::span<const Point> geometry) const;

 private:
  std::size_t cell_of(Point p) const;

  std::size_t w_;
  std::size_t h_;
  Point min_{};
  Point max_{};
  std::vector<std::uint32_t> counts_;
};

double derive_crowdedness(const PointSet& points, std::size_t grid_w, std::size_t grid_h,
                          std::span<const Point> edge_geometry);

/// Cost of one intersection per edge; summed over a path it is the hop count.
constexpr double unit_cost() noexcept { return 1.0; }

/// Reads `edge_id,length_km,speed_limit_kmh|-,road_class,tt_estimate_s,historical_times`
/// rows (historical times separated by `;`, may be empty). A header row whose
/// first field is `edge_id` is skipped. road_class is motorway, city or other.
std::vector<EdgeAttributes> load_edge_attributes(std::istream& in);

/// `x y` per line.
std::vector<Point> load_points(std::istream& in);

/// `edge_id x y` per line; appends geometry points to the matching attributes.
void load_edge_geometry(std::istream& in, std::vector<EdgeAttributes>& attrs);

struct DerivationOptions {
  double confidence_k = kDefaultConfidence;
  std::size_t grid_w = kDefaultGridSize;
  std::size_t grid_h = kDefaultGridSize;
  bool normalize = true;
};

/// Replaces the costs of `topology` with travel_time, congestion, crowdedness
/// and intersections derived from per-edge attributes (matched by edge id).
/// Zero-length edges get congestion 0. Throws ValidationError when an edge has
/// no attribute row, EmptyGeometry when it has no geometry.
RoadNetwork derive_cost_network(const RoadNetwork& topology, std::span<const EdgeAttributes> attrs,
                                const PointSet& points, const DerivationOptions& options = {});

}  // namespace prefmine::costs
