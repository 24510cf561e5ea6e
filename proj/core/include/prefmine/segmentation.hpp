#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prefmine/graph.hpp"
#include "prefmine/preference.hpp"
#include "prefmine/routing.hpp"
#include "prefmine/trajectory.hpp"

namespace prefmine {

/// Segment test. OptimalPath(i): the segment is a shortest path under cost i
/// alone. PersonalizedPath: the segment is shortest under some preference.
/// Both are monotone: sub-segments of a passing segment pass too.
struct Criterion {
  enum class Kind { OptimalPath, PersonalizedPath };

  Kind kind = Kind::PersonalizedPath;
  std::size_t cost_index = 0;

  static Criterion optimal_path(std::size_t cost_index) {
    return Criterion{Kind::OptimalPath, cost_index};
  }
  static Criterion personalized_path() { return Criterion{Kind::PersonalizedPath, 0}; }

  /// "ppts" or "opts:<cost name>".
  std::string label(const RoadNetwork& network) const;

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

/// Parses "ppts" or "opts:<cost name>" against the network header.
Criterion parse_criterion(const std::string& label, const RoadNetwork& network);

struct Segmentation {
  /// Interior segmentation points, strictly increasing node positions.
  std::vector<std::size_t> boundaries;
  /// One certifying preference per segment (PersonalizedPath only).
  std::vector<PreferenceVector> per_segment_preference;

  std::size_t num_segments() const noexcept { return boundaries.size() + 1; }
  /// [from, to) node-position pairs covering a trajectory with `num_nodes` positions.
  std::vector<std::pair<std::size_t, std::size_t>> segments(std::size_t num_nodes) const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Runs the criterion on segments of one trajectory at a time. Owns its
/// search buffers, so keep one per thread.
class SegmentTester {
 public:
  SegmentTester(const RoadNetwork& network, Criterion criterion, OracleOptions options = {});

  /// Whether the edge sequence satisfies the criterion.
  bool test(std::span<const EdgeId> segment);

  /// Preference certifying the last passing PersonalizedPath test.
  const std::optional<PreferenceVector>& last_preference() const noexcept { return last_alpha_; }
  std::size_t tests_run() const noexcept { return tests_; }
  const Criterion& criterion() const noexcept { return criterion_; }
  const RoadNetwork& network() const noexcept { return search_.network(); }

 private:
  Criterion criterion_;
  OracleOptions options_;
  ShortestPathSearch search_;
  std::optional<PreferenceVector> last_alpha_;
  std::size_t tests_ = 0;
};

bool satisfies(const Criterion& criterion, const RoadNetwork& network,
               std::span<const EdgeId> segment, const OracleOptions& options = {});

enum class PrefixSearch {
  /// Doubling then binary search: O(log k) tests per segment.
  Galloping,
  /// Extend one edge at a time; reference for differential testing.
  Linear,
};

struct PrefixResult {
  std::size_t end = 0;
  std::optional<PreferenceVector> alpha;
};

/// Largest end position p such that positions [start, p] pass the criterion.
/// Throws UnsegmentableEdge when the single edge at `start` fails.
PrefixResult longest_feasible_prefix(SegmentTester& tester, const Trajectory& traj,
                                     std::size_t start,
                                     PrefixSearch search = PrefixSearch::Galloping);

/// Greedy left-to-right segmentation. Throws Unsegmentable.
Segmentation segment(SegmentTester& tester, const Trajectory& traj,
                     PrefixSearch search = PrefixSearch::Galloping);
Segmentation segment(const Criterion& criterion, const RoadNetwork& network,
                     const Trajectory& traj, PrefixSearch search = PrefixSearch::Galloping,
                     const OracleOptions& options = {});

inline constexpr std::size_t kBruteForceEdgeCap = 12;

/// Exact minimum segmentation by dynamic programming over all boundary
/// positions. Throws TooLarge above `max_edges`, Unsegmentable when no
/// segmentation exists.
Segmentation brute_force_min_segmentation(SegmentTester& tester, const Trajectory& traj,
                                          std::size_t max_edges = kBruteForceEdgeCap);

}  // namespace prefmine
