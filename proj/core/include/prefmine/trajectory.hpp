#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/routing.hpp"

namespace prefmine {

/// Map-matched trajectory: a connected edge sequence e_1..e_n visiting nodes
/// v_0..v_n. Positions along it are node positions 0..n; the edges of the
/// sub-trajectory between positions a < b are e_{a+1}..e_b, i.e. edges()[a, b).
class Trajectory {
 public:
  Trajectory() = default;
  /// Throws UnknownEdge or ValidationError (disconnected, empty, bad break
  /// points, decreasing timestamps).
  Trajectory(const RoadNetwork& network, std::vector<EdgeId> edges,
             std::vector<std::size_t> break_points = {},
             std::optional<std::vector<double>> timestamps = std::nullopt);

  /// Trajectory without edges, parked at `node`.
  static Trajectory stationary(NodeId node);

  std::span<const EdgeId> edges() const noexcept { return edges_; }
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  /// k: number of node positions.
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  NodeId source() const { return nodes_.front(); }
  NodeId target() const { return nodes_.back(); }

  /// Sorted, unique node positions in [0, num_nodes()).
  const std::vector<std::size_t>& break_points() const noexcept { return break_points_; }
  void set_break_points(std::vector<std::size_t> positions);

  /// One non-decreasing time per edge, when known.
  const std::optional<std::vector<double>>& timestamps() const noexcept { return timestamps_; }

  /// Edges between node positions `from` < `to`.
  std::span<const EdgeId> slice(std::size_t from, std::size_t to) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  friend Trajectory strip_self_loops(const RoadNetwork& network, const Trajectory& traj);

  std::vector<EdgeId> edges_;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> break_points_;
  std::optional<std::vector<double>> timestamps_;
};

/// Removes every self-loop edge. Break points are remapped onto the merged
/// node positions and timestamps of removed edges are dropped.
Trajectory strip_self_loops(const RoadNetwork& network, const Trajectory& traj);

struct TripMeta {
  std::string vehicle_id;
  double start_time = 0.0;
  double end_time = 0.0;

  friend bool operator==(const TripMeta&, const TripMeta&) = default;
};

/// One trajectory plus the optional records attached to it in a trajectory file.
struct TrajectoryRecord {
  std::string id;
  Trajectory trajectory;
  std::optional<TripMeta> meta;
  /// Planted ground-truth preference (synthetic corpora).
  std::optional<PreferenceVector> planted;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

/// Reads the trajectory format:
///
///     traj <id> <edge_id>...
///     bp   <id> <node_position>...
///     ts   <id> <time>...                       (one per edge)
///     meta <id> <vehicle_id> <start_unix_s> <end_unix_s>
///     pref <id> <w_1> ... <w_d>
///
/// Edge ids are the labels used in the network file. `bp`, `ts`, `meta` and
/// `pref` must follow the `traj` line they refer to.
std::vector<TrajectoryRecord> load_trajectories(std::istream& in, const RoadNetwork& network);
std::vector<TrajectoryRecord> load_trajectories_file(const std::string& path,
                                                     const RoadNetwork& network);
void save_trajectories(std::ostream& out, const RoadNetwork& network,
                       std::span<const TrajectoryRecord> records);
void save_trajectories_file(const std::string& path, const RoadNetwork& network,
                            std::span<const TrajectoryRecord> records);

}  // namespace prefmine
