#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/routing.hpp"
#include "prefmine/stitching.hpp"
#include "prefmine/trajectory.hpp"

namespace prefmine::synth {

struct CostRange {
  double lo = 1.0;
  double hi = 10.0;
};

struct SynthConfig {
  std::size_t grid_w = 10;
  std::size_t grid_h = 10;
  /// Total number of cost types, the unit dimension included.
  std::size_t cost_dim = 4;
  bool include_unit_dim = true;
  /// Uniform ranges of the informative dimensions; missing entries use [1, 10).
  std::vector<CostRange> cost_ranges;
  /// Diagonal shortcuts costlier in every informative dimension than the
  /// two-edge detour around them.
  std::size_t dominated_edges = 0;

  std::uint64_t seed = 1;
  std::size_t num_trajectories = 100;
  std::size_t via_min = 1;
  std::size_t via_max = 3;
  /// Chance that a via point is forced off the direct route to the target.
  double off_path_probability = 1.0;
  /// Planted preferences are drawn from here; empty means uniform on the simplex.
  std::vector<PreferenceVector> preference_pool;
  double leg_gap_s = 600.0;
  double edge_time_s = 60.0;
  /// Relative perturbation of edge costs on the network trajectories are
  /// generated on; the reported network stays unperturbed.
  double noise = 0.0;
};

/// Throws ValidationError for an empty grid, a dimension that leaves no
/// informative cost, or an inverted cost range.
void validate(const SynthConfig& cfg);

/// Names of the generated cost types: travel_time, congestion, crowdedness,
/// then cost3.. for further informative dimensions; the unit dimension is
/// `intersections` and comes last.
std::vector<std::string> cost_names(const SynthConfig& cfg);

struct GridNetwork {
  RoadNetwork network;
  std::vector<EdgeId> dominated;
};

/// Bidirected grid with i.i.d. uniform costs per directed edge, node label
/// y * grid_w + x, normalized to mean one per dimension.
GridNetwork generate_grid(const SynthConfig& cfg);
RoadNetwork generate_grid_network(const SynthConfig& cfg);

/// Same topology with every cost scaled by an independent factor in
/// [1 - noise, 1 + noise].
RoadNetwork perturb_costs(const RoadNetwork& network, double noise, std::uint64_t seed);

/// The α-shortest s-t path as a trajectory. Throws ValidationError when
/// s == t and NoPath when t is unreachable.
Trajectory generate_personalized_trajectory(ShortestPathSearch& search,
                                            const PreferenceVector& alpha, NodeId s, NodeId t);

struct StitchedSample {
  std::vector<TimedTrajectory> legs;
  /// The concatenated legs with a break point at every via point.
  Trajectory full;
};

/// Legs follow the per-leg α-shortest paths between consecutive stops;
/// `stops` holds the source, the via points and the target. Each leg gets
/// per-edge timestamps `edge_time_s` apart and the next leg starts `gap_s`
/// after the previous one ends.
StitchedSample generate_stitched_trajectory(ShortestPathSearch& search,
                                            std::span<const NodeId> stops,
                                            std::span<const PreferenceVector> alphas,
                                            const std::string& id, const std::string& vehicle,
                                            double start_time, double gap_s, double edge_time_s);

/// Single-leg personalized trajectories with the planted preference attached.
std::vector<TrajectoryRecord> planted_corpus(const RoadNetwork& network, const SynthConfig& cfg);

struct StitchedCorpus {
  /// One record per leg with `meta`, ready for stitching.
  std::vector<TrajectoryRecord> legs;
  /// One record per vehicle: the full trajectory with ground-truth break points.
  std::vector<TrajectoryRecord> truth;
};

StitchedCorpus stitched_corpus(const RoadNetwork& network, const SynthConfig& cfg);

/// Trajectories that each traverse one dominated edge between two
/// personalized legs. Throws ValidationError when there are none to use.
std::vector<TrajectoryRecord> dominated_corpus(const GridNetwork& grid, const SynthConfig& cfg);

}  // namespace prefmine::synth
