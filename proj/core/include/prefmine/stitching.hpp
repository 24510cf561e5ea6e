#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/routing.hpp"
#include "prefmine/trajectory.hpp"

namespace prefmine {

struct TimedTrajectory {
  std::string id;
  std::string vehicle_id;
  Trajectory trajectory;
  double start_time = 0.0;
  double end_time = 0.0;
};

struct StitchedTrajectory {
  /// Id of the first input trajectory folded into this one.
  std::string id;
  std::string vehicle_id;
  /// Carries the stitch positions as its break points.
  Trajectory trajectory;
  /// Node positions where each following input trajectory begins.
  std::vector<std::size_t> break_points;
  /// Edge positions of inserted connector edges.
  std::vector<std::size_t> stitch_edges;
  std::vector<std::string> source_ids;
  double start_time = 0.0;
  double end_time = 0.0;
};

struct StitchConfig {
  double gap_max_s = 30.0 * 60.0;
  double len_max_m = 200.0;
  /// Cost dimension holding edge length. Defaults to the `length_m` column;
  /// without one only the single-edge condition applies.
  std::optional<std::size_t> length_dim;
};

/// Length-shortest connector from the end of `t1` to the start of `t2` if it
/// has at most one edge or is shorter than `len_max_m`. Empty when the
/// endpoints coincide.
std::optional<Path> pseudo_connected(ShortestPathSearch& search, const Trajectory& t1,
                                     const Trajectory& t2, const StitchConfig& config = {});
std::optional<Path> pseudo_connected(const RoadNetwork& network, const Trajectory& t1,
                                     const Trajectory& t2, const StitchConfig& config = {});

/// Folds one vehicle's trips, ordered by start time. Throws UnsortedInput.
std::vector<StitchedTrajectory> stitch_vehicle(ShortestPathSearch& search,
                                               std::span<const TimedTrajectory> trips,
                                               const StitchConfig& config = {});

/// Groups trips by vehicle and stitches each group. Output is ordered by the
/// input position of each output's first trip. Throws UnsortedInput.
std::vector<StitchedTrajectory> stitch_all(const RoadNetwork& network,
                                           std::span<const TimedTrajectory> trips,
                                           const StitchConfig& config = {});

/// Trips with `meta` records become TimedTrajectory values; throws
/// ValidationError naming the first record without one.
std::vector<TimedTrajectory> timed_trajectories(std::span<const TrajectoryRecord> records);

TrajectoryRecord to_record(const StitchedTrajectory& stitched);

}  // namespace prefmine
