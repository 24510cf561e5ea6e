#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/lp.hpp"
#include "prefmine/routing.hpp"

namespace prefmine {

/// Violation tolerance of the Dijkstra separation oracle, in normalized
/// personalized-cost units.
inline constexpr double kOracleTolerance = 1e-6;
inline constexpr std::size_t kOracleIterationCap = 10000;

struct OracleOptions {
  double epsilon = kOracleTolerance;
  std::size_t max_iterations = kOracleIterationCap;
  double lp_tolerance = lp::kFeasibilityTolerance;
};

/// Endpoints and summed cost vector of the path under test. All oracle work
/// only needs these, never the individual edges.
struct PathSummary {
  NodeId source{};
  NodeId target{};
  CostVector costs;
};

/// Validates `edges` as a connected nonempty path and summarizes it.
PathSummary summarize_path(const RoadNetwork& network, std::span<const EdgeId> edges);

/// No path beats the summarized one by more than `delta + epsilon`.
struct OracleConverged {
  double delta;
};

/// A path `violator` that beats the summarized one by `violation` > delta +
/// epsilon. `coeffs` are the alpha coefficients of the new cut,
/// c(T) - c(violator); the caller appends -1 for delta when mining.
struct OracleCut {
  std::vector<double> coeffs;
  double violation;
  Path violator;
};

using OracleOutcome = std::variant<OracleConverged, OracleCut>;

/// One separation-oracle round: a preference-weighted Dijkstra from the path
/// source to its target under `alpha`, checking whether any route undercuts
/// the path by more than `delta + epsilon`.
OracleOutcome oracle_round(ShortestPathSearch& search, const PathSummary& path,
                           const PreferenceVector& alpha, double delta, double epsilon);

struct FeasibilityResult {
  std::optional<PreferenceVector> alpha;
  std::size_t iterations = 0;
};

/// Cutting-plane decision of whether `edges` is shortest under some
/// preference. Returns the certifying preference, or nullopt once the LP
/// becomes infeasible. Throws OracleDivergence past the iteration cap.
FeasibilityResult decide_personalized_path(ShortestPathSearch& search,
                                           std::span<const EdgeId> edges,
                                           const OracleOptions& options = {});

std::optional<PreferenceVector> is_personalized_path(const RoadNetwork& network,
                                                     std::span<const EdgeId> edges,
                                                     const OracleOptions& options = {});

struct MiningResult {
  PreferenceVector alpha;
  /// Smallest achievable gap between the trajectory and the alpha-shortest route.
  double delta = 0.0;
  /// Alpha-shortest route between the trajectory endpoints.
  Path recovered_route;
  std::size_t iterations = 0;
  std::size_t constraints_added = 0;
  /// Source equals target; the recovered route is empty.
  bool round_trip = false;
};

/// Robust preference mining: minimizes delta over the simplex subject to
/// p(T|alpha) - p(pi|alpha) <= delta for every route pi, adding route
/// constraints on demand through oracle_round. Always succeeds on a valid
/// path; throws OracleDivergence past the iteration cap. When delta is zero,
/// alpha is moved to where the path beats the alternatives met so far by the
/// widest margin, so the recovered route is the path itself whenever possible.
MiningResult recover_preference(ShortestPathSearch& search, std::span<const EdgeId> edges,
                                const OracleOptions& options = {});
MiningResult recover_preference(const RoadNetwork& network, std::span<const EdgeId> edges,
                                const OracleOptions& options = {});

}  // namespace prefmine
