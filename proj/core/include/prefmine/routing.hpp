#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "prefmine/graph.hpp"

namespace prefmine {

/// Driving preference: d nonnegative weights that sum to one.
class PreferenceVector {
 public:
  /// Throws ValidationError unless the weights lie on the simplex (sum within 1e-9).
  explicit PreferenceVector(std::vector<double> weights);

  static PreferenceVector uniform(std::size_t dim);
  /// All weight on cost `i`.
  static PreferenceVector unit(std::size_t dim, std::size_t i);
  /// Clamps negative entries to zero and rescales to sum one; used to clean up
  /// LP solutions that sit a rounding error outside the simplex.
  static PreferenceVector from_unnormalized(std::span<const double> raw);

  std::size_t dim() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;

 private:
  std::vector<double> weights_;
};

/// Route as an edge sequence. An empty path is valid when source == target.
struct Path {
  NodeId source{};
  NodeId target{};
  std::vector<EdgeId> edges;

  std::size_t hops() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }

  friend bool operator==(const Path&, const Path&) = default;
};

/// Builds a path from `edges`, checking that consecutive edges are incident.
/// Throws UnknownEdge or ValidationError.
Path make_path(const RoadNetwork& network, std::vector<EdgeId> edges);
Path empty_path(NodeId at);

/// Componentwise sum of the edge cost vectors; zero vector for no edges.
CostVector path_cost_vector(const RoadNetwork& network, std::span<const EdgeId> edges);

/// Dot product of a cost vector with the preference.
double personalized_cost(std::span<const double> costs, const PreferenceVector& pref);
/// Personalized cost of a path: the summed cost vector dotted with `pref`.
double personalized_cost(const RoadNetwork& network, std::span<const EdgeId> edges,
                         const PreferenceVector& pref);

/// Preference-weighted Dijkstra with reusable label storage.
///
/// Ties between equal-cost paths go to fewer hops, then to the
/// lexicographically smallest EdgeId sequence, so results are reproducible.
/// One instance per thread; it only reads the network.
class ShortestPathSearch {
 public:
  explicit ShortestPathSearch(const RoadNetwork& network);

  /// Shortest `s`-`t` path under `pref`, or nullopt when `t` is unreachable or
  /// every `s`-`t` path costs more than `cost_bound`. Labels above the bound are
  /// never expanded, which keeps oracle queries local.
  std::optional<Path> run(NodeId s, NodeId t, const PreferenceVector& pref,
                          double cost_bound = std::numeric_limits<double>::infinity());

  /// Search-order cost of the path returned by the last successful run.
  double last_cost() const noexcept { return last_cost_; }
  /// Nodes settled by the last run.
  std::size_t last_settled() const noexcept { return last_settled_; }

  const RoadNetwork& network() const noexcept { return *network_; }

 private:
  bool lex_less(EdgeId candidate_edge, NodeId candidate_parent, NodeId node);
  bool fresh(std::uint32_t n) const { return stamp_[n] == generation_; }

  const RoadNetwork* network_;
  std::vector<double> dist_;
  std::vector<std::uint32_t> hops_;
  std::vector<EdgeId> parent_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> settled_;
  std::uint32_t generation_ = 0;

  struct QueueEntry {
    double cost;
    std::uint32_t hops;
    std::uint32_t node;
  };
  std::vector<QueueEntry> heap_;
  std::vector<EdgeId> chain_a_;
  std::vector<EdgeId> chain_b_;
  double last_cost_ = 0.0;
  std::size_t last_settled_ = 0;
};

/// Shortest `s`-`t` path under `pref`. Throws NoPath or DimensionMismatch.
Path shortest_path(const RoadNetwork& network, NodeId s, NodeId t, const PreferenceVector& pref);

}  // namespace prefmine
