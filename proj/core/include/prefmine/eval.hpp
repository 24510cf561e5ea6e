#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/routing.hpp"
#include "prefmine/trajectory.hpp"

namespace prefmine::eval {

// Break points (BP) and segmentation points (SP) are node positions along a
// trajectory. Both spans may be unsorted and contain duplicates.

/// |BP ∩ SP| / |BP|. Throws NoBreakPoints.
double brr(std::span<const std::size_t> break_points, std::span<const std::size_t> seg_points);
/// |SP| / |BP|. Throws NoBreakPoints.
double sr(std::span<const std::size_t> break_points, std::span<const std::size_t> seg_points);
/// BRR / SR, and 0 when SP is empty.
double sq(std::span<const std::size_t> break_points, std::span<const std::size_t> seg_points);

struct SegmentationScore {
  double brr = 0.0;
  double sr = 0.0;
  double sq = 0.0;
  bool segmentable = false;
};

SegmentationScore score_segmentation(std::span<const std::size_t> break_points,
                                     std::span<const std::size_t> seg_points, bool segmentable);

/// Fraction of segmentable trajectories; 0 for no input.
double s_score(std::span<const bool> segmentable);

/// Hop distance from each break point to the nearest segmentation point,
/// nullopt (infinite) when SP is empty.
std::vector<std::optional<std::size_t>> distance_to_next_sp(
    const Trajectory& traj, std::span<const std::size_t> break_points,
    std::span<const std::size_t> seg_points);

/// cdf[h]: fraction of distances that are at most h, for h = 0..max_hops.
/// Infinite distances count in the denominator only.
std::vector<double> distance_cdf(std::span<const std::optional<std::size_t>> distances,
                                 std::size_t max_hops);

/// |edges(T) ∩ edges(π)| / |edges(T)| over edge sets.
double rrro(std::span<const EdgeId> traj, std::span<const EdgeId> recovered);

/// p(π|α) / p(T|α). Throws ValidationError when p(T|α) is not positive and
/// NumericalFailure when π undercuts T by more than the oracle tolerance
/// would allow for an α-shortest route.
double rcrs(const RoadNetwork& network, std::span<const EdgeId> traj,
            std::span<const EdgeId> recovered, const PreferenceVector& alpha);

struct MiningScore {
  double rrro = 0.0;
  double rcrs = 0.0;
};

/// Computes the α-shortest route between the trajectory endpoints and scores
/// it. Round trips (source == target) score zero on both.
MiningScore score_preference(ShortestPathSearch& search, std::span<const EdgeId> traj,
                             const PreferenceVector& alpha, Path* route_out = nullptr);

/// All weight on travel time. Throws ValidationError for a bad index.
PreferenceVector ttp_preference(std::size_t dim, std::size_t travel_time_index);

enum class EvalFunction { Rrro, Rcrs };

inline constexpr std::size_t kBrpCandidates = 5;

/// Uniform sample from the probability simplex.
PreferenceVector sample_simplex(std::size_t dim, std::mt19937_64& rng);

struct BrpResult {
  PreferenceVector alpha;
  double score = 0.0;
  std::vector<PreferenceVector> candidates;
  std::vector<double> candidate_scores;
};

/// Best of kBrpCandidates uniform random preferences under `fn`; the first
/// candidate wins ties. Deterministic per seed.
BrpResult brp_preference(ShortestPathSearch& search, std::span<const EdgeId> traj,
                         EvalFunction fn, std::uint64_t seed);

}  // namespace prefmine::eval
