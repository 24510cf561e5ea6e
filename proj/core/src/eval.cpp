#include "prefmine/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prefmine/error.hpp"
#include "prefmine/preference.hpp"

namespace prefmine::eval {

namespace {

std::vector<std::size_t> as_set(std::span<const std::size_t> v) {
  std::vector<std::size_t> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::size_t intersection_size(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

// Uniform double in (0, 1) from the top 53 bits.
double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double brr(std::span<const std::size_t> break_points, std::span<const std::size_t> seg_points) {
  const auto bp = as_set(break_points);
  if (bp.empty()) throw NoBreakPoints("BRR needs at least one break point");
  return static_cast<double>(intersection_size(bp, as_set(seg_points))) /
         static_cast<double>(bp.size());
}

double sr(std::span<const std::size_t> break_points, std::span<const std::size_t> seg_points) {
  const auto bp = as_set(break_points);
  if (bp.empty()) throw NoBreakPoints("SR needs at least one break point");
  return static_cast<double>(as_set(seg_points).size()) / static_cast<double>(bp.size());
}

double sq(std::span<const std::size_t> break_points, std::span<const std::size_t> seg_points) {
  const double r = sr(break_points, seg_points);
  if (r == 0.0) return 0.0;
  return brr(break_points, seg_points) / r;
}

SegmentationScore score_segmentation(std::span<const std::size_t> break_points,
                                     std::span<const std::size_t> seg_points, bool segmentable) {
  return SegmentationScore{brr(break_points, seg_points), sr(break_points, seg_points),
                           sq(break_points, seg_points), segmentable};
}

double s_score(std::span<const bool> segmentable) {
  if (segmentable.empty()) return 0.0;
  const auto n = std::count(segmentable.begin(), segmentable.end(), true);
  return static_cast<double>(n) / static_cast<double>(segmentable.size());
}

std::vector<std::optional<std::size_t>> distance_to_next_sp(
    const Trajectory& traj, std::span<const std::size_t> break_points,
    std::span<const std::size_t> seg_points) {
  const std::size_t k = traj.num_nodes();
  for (const auto p : break_points) {
    if (p >= k) throw ValidationError("break point outside the trajectory");
  }
  for (const auto p : seg_points) {
    if (p >= k) throw ValidationError("segmentation point outside the trajectory");
  }
  const auto sp = as_set(seg_points);
  std::vector<std::optional<std::size_t>> out;
  out.reserve(break_points.size());
  for (const std::size_t b : break_points) {
    if (sp.empty()) {
      out.emplace_back();
      continue;
    }
    const auto it = std::lower_bound(sp.begin(), sp.end(), b);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    if (it != sp.end()) best = *it - b;
    if (it != sp.begin()) best = std::min(best, b - *std::prev(it));
    out.emplace_back(best);
  }
  return out;
}

std::vector<double> distance_cdf(std::span<const std::optional<std::size_t>> distances,
                                  std::size_t max_hops) {
  std::vector<double> cdf(max_hops + 1, 0.0);
  if (distances.empty()) return cdf;
  std::vector<std::size_t> counts(max_hops + 1, 0);
  for (const auto& d : distances) {
    if (d && *d <= max_hops) ++counts[*d];
  }
  std::size_t running = 0;
  for (std::size_t h = 0; h <= max_hops; ++h) {
    running += counts[h];
    cdf[h] = static_cast<double>(running) / static_cast<double>(distances.size());
  }
  return cdf;
}

double rrro(std::span<const EdgeId> traj, std::span<const EdgeId> recovered) {
  auto to_set = [](std::span<const EdgeId> edges) {
    std::vector<std::size_t> s;
    s.reserve(edges.size());
    for (const EdgeId e : edges) s.push_back(index(e));
    return as_set(s);
  };
  const auto t = to_set(traj);
  if (t.empty()) throw ValidationError("RRRO needs a nonempty trajectory");
  return static_cast<double>(intersection_size(t, to_set(recovered))) /
         static_cast<double>(t.size());
}

double rcrs(const RoadNetwork& network, std::span<const EdgeId> traj,
            std::span<const EdgeId> recovered, const PreferenceVector& alpha) {
  const double pt = personalized_cost(network, traj, alpha);
  if (!(pt > 0.0)) throw ValidationError("RCRS needs a trajectory with positive cost");
  const double pr = personalized_cost(network, recovered, alpha);
  if (pr > pt + kOracleTolerance * std::max(1.0, pt)) {
    throw NumericalFailure("recovered route costs more than the trajectory");
  }
  return std::min(pr / pt, 1.0);
}

MiningScore score_preference(ShortestPathSearch& search, std::span<const EdgeId> traj,
                             const PreferenceVector& alpha, Path* route_out) {
  const RoadNetwork& net = search.network();
  const PathSummary summary = summarize_path(net, traj);
  if (summary.source == summary.target) {
    if (route_out) *route_out = empty_path(summary.source);
    return {};
  }
  auto route = search.run(summary.source, summary.target, alpha);
  if (!route) throw NumericalFailure("trajectory endpoints are disconnected");
  MiningScore score{rrro(traj, route->edges), rcrs(net, traj, route->edges, alpha)};
  if (route_out) *route_out = std::move(*route);
  return score;
}

PreferenceVector ttp_preference(std::size_t dim, std::size_t travel_time_index) {
  if (travel_time_index >= dim) {
    throw ValidationError("travel time index " + std::to_string(travel_time_index) +
                          " is out of range for dimension " + std::to_string(dim));
  }
  return PreferenceVector::unit(dim, travel_time_index);
}

PreferenceVector sample_simplex(std::size_t dim, std::mt19937_64& rng) {
  if (dim == 0) throw ValidationError("preference dimension must be positive");
  // Normalized unit exponentials are Dirichlet(1, ..., 1).
  std::vector<double> w(dim);
  for (double& x : w) x = -std::log(open_unit(rng));
  return PreferenceVector::from_unnormalized(w);
}

BrpResult brp_preference(ShortestPathSearch& search, std::span<const EdgeId> traj,
                         EvalFunction fn, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t d = search.network().cost_dim();
  std::vector<PreferenceVector> candidates;
  std::vector<double> scores;
  std::size_t best = 0;
  for (std::size_t i = 0; i < kBrpCandidates; ++i) {
    candidates.push_back(sample_simplex(d, rng));
    const MiningScore s = score_preference(search, traj, candidates.back());
    scores.push_back(fn == EvalFunction::Rrro ? s.rrro : s.rcrs);
    if (scores[i] > scores[best]) best = i;
  }
  return BrpResult{candidates[best], scores[best], std::move(candidates), std::move(scores)};
}

}  // namespace prefmine::eval
