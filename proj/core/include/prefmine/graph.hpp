#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prefmine {

/// Dense node index inside a RoadNetwork.
enum class NodeId : std::uint32_t {};
/// Dense edge index inside a RoadNetwork. Paths and trajectories are edge
/// sequences because the network is a multigraph.
enum class EdgeId : std::uint32_t {};

constexpr std::uint32_t index(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index(EdgeId id) noexcept { return static_cast<std::uint32_t>(id); }

/// One value per cost type, all finite and nonnegative.
using CostVector = std::vector<double>;

/// Lightweight view of an edge; `costs` points into the owning network.
struct Edge {
  EdgeId id;
  NodeId source;
  NodeId target;
  std::span<const double> costs;

  bool is_self_loop() const noexcept { return source == target; }
};

/// Name of the cost dimension holding segment length in meters. Stitching
/// measures connector length with it.
inline constexpr std::string_view kLengthCostName = "length_m";

/// Directed multigraph with `cost_dim()` nonnegative costs per edge.
///
/// Immutable after construction; share it read-only across threads. Nodes and
/// edges carry the integer labels they were loaded with so that files
/// round-trip, while all algorithms work on the dense NodeId/EdgeId indices
/// (assigned in insertion order).
class RoadNetwork {
 public:
  RoadNetwork() = default;

  std::size_t cost_dim() const noexcept { return cost_names_.size(); }
  const std::vector<std::string>& cost_names() const noexcept { return cost_names_; }
  std::optional<std::size_t> cost_index(std::string_view name) const;

  /// Product of the divisors applied by normalize_costs; multiplying a
  /// normalized cost by its scale restores the original unit.
  const std::vector<double>& cost_scales() const noexcept { return cost_scales_; }

  std::size_t num_nodes() const noexcept { return node_labels_.size(); }
  std::size_t num_edges() const noexcept { return sources_.size(); }

  bool contains(NodeId n) const noexcept { return index(n) < num_nodes(); }
  bool contains(EdgeId e) const noexcept { return index(e) < num_edges(); }

  NodeId source(EdgeId e) const { return sources_[index(e)]; }
  NodeId target(EdgeId e) const { return targets_[index(e)]; }
  std::span<const double> costs(EdgeId e) const {
    return {costs_.data() + static_cast<std::size_t>(index(e)) * cost_dim(), cost_dim()};
  }
  Edge edge(EdgeId e) const { return Edge{e, source(e), target(e), costs(e)}; }

  std::span<const EdgeId> out_edges(NodeId n) const {
    const auto i = index(n);
    return {out_edges_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
  }

  std::int64_t node_label(NodeId n) const { return node_labels_[index(n)]; }
  std::int64_t edge_label(EdgeId e) const { return edge_labels_[index(e)]; }
  std::optional<NodeId> find_node(std::int64_t label) const;
  std::optional<EdgeId> find_edge(std::int64_t label) const;

  /// Flat row-major cost table, `num_edges() * cost_dim()` entries.
  std::span<const double> cost_table() const noexcept { return costs_; }

  /// Same topology with a replacement cost table (validated).
  RoadNetwork with_costs(std::vector<double> costs, std::vector<double> scales) const;

  friend bool operator==(const RoadNetwork&, const RoadNetwork&) = default;

 private:
  friend class NetworkBuilder;
  void finalize();

  std::vector<std::string> cost_names_;
  std::vector<double> cost_scales_;
  std::vector<std::int64_t> node_labels_;
  std::vector<std::int64_t> edge_labels_;
  std::vector<NodeId> sources_;
  std::vector<NodeId> targets_;
  std::vector<double> costs_;
  std::vector<std::size_t> out_offsets_;
  std::vector<EdgeId> out_edges_;
  std::unordered_map<std::int64_t, NodeId> node_lookup_;
  std::unordered_map<std::int64_t, EdgeId> edge_lookup_;
};

/// Incremental construction of a RoadNetwork; every call validates eagerly.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(std::vector<std::string> cost_names);

  NodeId add_node(std::int64_t label);
  EdgeId add_edge(std::int64_t label, std::int64_t source_label, std::int64_t target_label,
                  std::span<const double> costs);
  void set_cost_scales(std::vector<double> scales);

  std::size_t num_nodes() const noexcept { return net_.node_labels_.size(); }
  std::size_t num_edges() const noexcept { return net_.edge_labels_.size(); }

  RoadNetwork build() &&;

 private:
  RoadNetwork net_;
};

enum class NetworkFormat { Text };

/// Reads the line-oriented network format:
///
///     d <cost_dim> <name_1> ... <name_d>
///     s <scale_1> ... <scale_d>        (optional, written after normalization)
///     n <node_id>
///     e <edge_id> <src> <dst> <c_1> ... <c_d>
///
/// Lines starting with `#` are comments.
RoadNetwork load_network(std::istream& in, NetworkFormat format = NetworkFormat::Text);
RoadNetwork load_network_file(const std::string& path);
void save_network(std::ostream& out, const RoadNetwork& network);
void save_network_file(const std::string& path, const RoadNetwork& network);

/// Divides every cost dimension by its mean over all edges.
RoadNetwork normalize_costs(const RoadNetwork& network);

}  // namespace prefmine
