#include "prefmine/segmentation.hpp"

#include <algorithm>
#include <limits>

#include "prefmine/error.hpp"

namespace prefmine {

std::string Criterion::label(const RoadNetwork& network) const {
  if (kind == Kind::PersonalizedPath) return "ppts";
  return "opts:" + network.cost_names().at(cost_index);
}

Criterion parse_criterion(const std::string& label, const RoadNetwork& network) {
  if (label == "ppts") return Criterion::personalized_path();
  const std::string prefix = "opts:";
  if (label.rfind(prefix, 0) == 0) {
    const auto name = label.substr(prefix.size());
    const auto i = network.cost_index(name);
    if (!i) throw ValidationError("network has no cost type named `" + name + "`");
    return Criterion::optimal_path(*i);
  }
  throw ValidationError("unknown segmentation criterion `" + label + "`");
}

std::vector<std::pair<std::size_t, std::size_t>> Segmentation::segments(
    std::size_t num_nodes) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t from = 0;
  for (const std::size_t b : boundaries) {
    out.emplace_back(from, b);
    from = b;
  }
  out.emplace_back(from, num_nodes - 1);
  return out;
}

SegmentTester::SegmentTester(const RoadNetwork& network, Criterion criterion,
                             OracleOptions options)
    : criterion_(criterion), options_(options), search_(network) {
  if (criterion_.kind == Criterion::Kind::OptimalPath &&
      criterion_.cost_index >= network.cost_dim()) {
    throw ValidationError("criterion cost index out of range");
  }
}

bool SegmentTester::test(std::span<const EdgeId> segment) {
  ++tests_;
  if (criterion_.kind == Criterion::Kind::PersonalizedPath) {
    auto result = decide_personalized_path(search_, segment, options_);
    if (!result.alpha) return false;
    last_alpha_ = std::move(result.alpha);
    return true;
  }

  const RoadNetwork& net = search_.network();
  const PathSummary summary = summarize_path(net, segment);
  const auto pref = PreferenceVector::unit(net.cost_dim(), criterion_.cost_index);
  const double own = summary.costs[criterion_.cost_index];
  const double bound = own - 0.5 * options_.epsilon;
  if (bound < 0.0) return true;
  const auto best = search_.run(summary.source, summary.target, pref, bound);
  if (!best) return true;
  const double best_cost = path_cost_vector(net, best->edges)[criterion_.cost_index];
  return own - best_cost <= options_.epsilon;
}

bool satisfies(const Criterion& criterion, const RoadNetwork& network,
               std::span<const EdgeId> segment, const OracleOptions& options) {
  SegmentTester tester(network, criterion, options);
  return tester.test(segment);
}

PrefixResult longest_feasible_prefix(SegmentTester& tester, const Trajectory& traj,
                                     std::size_t start, PrefixSearch search) {
  const std::size_t last = traj.num_nodes() - 1;
  if (start >= last) throw ValidationError("prefix start must precede the last node");

  PrefixResult result;
  if (!tester.test(traj.slice(start, start + 1))) {
    throw UnsegmentableEdge("edge at position " + std::to_string(start) +
                                " fails the segmentation criterion",
                            start);
  }
  result.end = start + 1;
  result.alpha = tester.last_preference();

  auto probe = [&](std::size_t end) {
    if (!tester.test(traj.slice(start, end))) return false;
    result.end = end;
    result.alpha = tester.last_preference();
    return true;
  };

  if (search == PrefixSearch::Linear) {
    for (std::size_t end = start + 2; end <= last; ++end) {
      if (!probe(end)) break;
    }
    return result;
  }

  // Gallop: double the segment length until a test fails or the end is hit.
  std::size_t bad = 0;
  while (result.end < last) {
    const std::size_t next = std::min(start + 2 * (result.end - start), last);
    if (!probe(next)) {
      bad = next;
      break;
    }
  }
  if (bad == 0) return result;
  while (bad - result.end > 1) {
    const std::size_t mid = result.end + (bad - result.end) / 2;
    if (!probe(mid)) bad = mid;
  }
  return result;
}

Segmentation segment(SegmentTester& tester, const Trajectory& traj, PrefixSearch search) {
  if (traj.empty()) throw ValidationError("cannot segment an empty trajectory");
  const bool personalized = tester.criterion().kind == Criterion::Kind::PersonalizedPath;
  const std::size_t last = traj.num_nodes() - 1;

  Segmentation seg;
  std::size_t start = 0;
  for (;;) {
    PrefixResult prefix;
    try {
      prefix = longest_feasible_prefix(tester, traj, start, search);
    } catch (const UnsegmentableEdge& e) {
      throw Unsegmentable(e.what(), e.position());
    }
    if (personalized) seg.per_segment_preference.push_back(std::move(*prefix.alpha));
    if (prefix.end == last) break;
    seg.boundaries.push_back(prefix.end);
    start = prefix.end;
  }
  return seg;
}

Segmentation segment(const Criterion& criterion, const RoadNetwork& network,
                     const Trajectory& traj, PrefixSearch search, const OracleOptions& options) {
  SegmentTester tester(network, criterion, options);
  return segment(tester, traj, search);
}

Segmentation brute_force_min_segmentation(SegmentTester& tester, const Trajectory& traj,
                                          std::size_t max_edges) {
  if (traj.empty()) throw ValidationError("cannot segment an empty trajectory");
  if (traj.num_edges() > max_edges) {
    throw TooLarge("brute-force segmentation is capped at " + std::to_string(max_edges) +
                   " edges");
  }
  const bool personalized = tester.criterion().kind == Criterion::Kind::PersonalizedPath;
  const std::size_t k = traj.num_nodes();
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  // best[j]: fewest segments covering positions [0, j]; from[j]: start of the last one.
  std::vector<std::size_t> best(k, kInf);
  std::vector<std::size_t> from(k, 0);
  std::vector<std::vector<std::optional<PreferenceVector>>> alpha(
      k, std::vector<std::optional<PreferenceVector>>(k));
  best[0] = 0;
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (best[i] == kInf || best[i] + 1 >= best[j]) continue;
      if (!tester.test(traj.slice(i, j))) continue;
      best[j] = best[i] + 1;
      from[j] = i;
      alpha[i][j] = tester.last_preference();
    }
  }
  if (best[k - 1] == kInf) {
    std::size_t bad = 0;
    while (bad + 1 < k && best[bad + 1] != kInf) ++bad;
    throw Unsegmentable("trajectory admits no segmentation", bad);
  }

  Segmentation seg;
  std::vector<std::size_t> cuts;
  for (std::size_t j = k - 1; j != 0; j = from[j]) {
    cuts.push_back(j);
    if (personalized) seg.per_segment_preference.push_back(*alpha[from[j]][j]);
  }
  std::reverse(cuts.begin(), cuts.end());
  std::reverse(seg.per_segment_preference.begin(), seg.per_segment_preference.end());
  cuts.pop_back();
  seg.boundaries = std::move(cuts);
  return seg;
}

}  // namespace prefmine
