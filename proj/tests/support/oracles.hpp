#pragma once

// Brute-force reference implementations used to check the library.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/lp.hpp"
#include "prefmine/routing.hpp"

namespace prefmine::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
std::size_t below(Rng& rng, std::size_t n);

struct TinyGraphOptions {
  std::size_t nodes = 6;
  std::size_t dim = 2;
  std::size_t min_out = 1;
  std::size_t max_out = 3;
  /// Small integer costs make equal-cost ties likely.
  bool integer_costs = false;
  bool allow_zero = false;
  bool unit_dim = false;
};

/// Random sparse directed multigraph without self-loops.
RoadNetwork random_tiny_graph(Rng& rng, const TinyGraphOptions& opts);

/// Random walk of `len` edges from a random node with outgoing edges; shorter
/// when it reaches a sink.
std::vector<EdgeId> random_walk(const RoadNetwork& net, Rng& rng, std::size_t len);

/// Every simple s-t path (no repeated node); {empty} when s == t.
std::vector<std::vector<EdgeId>> simple_paths(const RoadNetwork& net, NodeId s, NodeId t);

/// Cheapest s-t path by exhaustive search with the same tie-break rule as the
/// library: cost, then hops, then lexicographic edge sequence.
std::optional<std::vector<EdgeId>> brute_force_shortest(const RoadNetwork& net, NodeId s, NodeId t,
                                                        const PreferenceVector& pref);

/// Smallest delta of the robust preference LP with one row per simple path.
double enumeration_delta(const RoadNetwork& net, std::span<const EdgeId> path);

/// Whether some preference makes `path` no costlier than every simple path.
bool enumeration_feasible(const RoadNetwork& net, std::span<const EdgeId> path);

/// Optimum of a bounded LP by enumerating all basic solutions; nullopt when
/// infeasible.
std::optional<double> vertex_enumeration_optimum(const lp::LinearProgram& program);

}  // namespace prefmine::testing
