#include "prefmine/routing.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "prefmine/error.hpp"

namespace prefmine {

namespace {

constexpr double kSimplexTolerance = 1e-9;

void check_dim(const RoadNetwork& network, const PreferenceVector& pref) {
  if (pref.dim() != network.cost_dim()) {
    throw DimensionMismatch("preference has " + std::to_string(pref.dim()) +
                            " weights but the network has " +
                            std::to_string(network.cost_dim()) + " cost types");
  }
}

}  // namespace

PreferenceVector::PreferenceVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("preference vector is empty");
  double sum = 0.0;
  for (const double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("preference weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw ValidationError("preference weights sum to " + std::to_string(sum) + ", not 1");
  }
}

PreferenceVector PreferenceVector::uniform(std::size_t dim) {
  return PreferenceVector(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

PreferenceVector PreferenceVector::unit(std::size_t dim, std::size_t i) {
  if (i >= dim) throw ValidationError("unit preference index out of range");
  std::vector<double> w(dim, 0.0);
  w[i] = 1.0;
  return PreferenceVector(std::move(w));
}

PreferenceVector PreferenceVector::from_unnormalized(std::span<const double> raw) {
  std::vector<double> w(raw.begin(), raw.end());
  double sum = 0.0;
  for (double& x : w) {
    if (!std::isfinite(x)) throw ValidationError("non-finite preference weight");
    x = std::max(x, 0.0);
    sum += x;
  }
  if (!(sum > 0.0)) throw ValidationError("preference weights are all zero");
  for (double& x : w) x /= sum;
  // Renormalization can leave the sum a few ulps off; fold the residue into
  // the largest weight.
  double total = 0.0;
  for (const double x : w) total += x;
  auto largest = std::max_element(w.begin(), w.end());
  *largest = std::max(0.0, *largest + (1.0 - total));
  return PreferenceVector(std::move(w));
}

Path make_path(const RoadNetwork& network, std::vector<EdgeId> edges) {
  if (edges.empty()) throw ValidationError("make_path needs at least one edge; use empty_path");
  for (const EdgeId e : edges) {
    if (!network.contains(e)) throw UnknownEdge("unknown edge index " + std::to_string(index(e)));
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (network.target(edges[i - 1]) != network.source(edges[i])) {
      throw ValidationError("edges " + std::to_string(network.edge_label(edges[i - 1])) + " and " +
                            std::to_string(network.edge_label(edges[i])) + " are not incident");
    }
  }
  Path p;
  p.source = network.source(edges.front());
  p.target = network.target(edges.back());
  p.edges = std::move(edges);
  return p;
}

Path empty_path(NodeId at) { return Path{at, at, {}}; }

CostVector path_cost_vector(const RoadNetwork& network, std::span<const EdgeId> edges) {
  CostVector sum(network.cost_dim(), 0.0);
  for (const EdgeId e : edges) {
    if (!network.contains(e)) throw UnknownEdge("unknown edge index " + std::to_string(index(e)));
    const auto c = network.costs(e);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c[i];
  }
  return sum;
}

double personalized_cost(std::span<const double> costs, const PreferenceVector& pref) {
  if (costs.size() != pref.dim()) {
    throw DimensionMismatch("cost vector and preference differ in dimension");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) v += pref[i] * costs[i];
  return v;
}

double personalized_cost(const RoadNetwork& network, std::span<const EdgeId> edges,
                         const PreferenceVector& pref) {
  check_dim(network, pref);
  return personalized_cost(path_cost_vector(network, edges), pref);
}

ShortestPathSearch::ShortestPathSearch(const RoadNetwork& network)
    : network_(&network),
      dist_(network.num_nodes()),
      hops_(network.num_nodes()),
      parent_(network.num_nodes()),
      stamp_(network.num_nodes(), 0),
      settled_(network.num_nodes(), 0) {}

// Compares the edge sequence (path to candidate_parent) + candidate_edge with
// the current label path of `node`. Both have the same hop count.
bool ShortestPathSearch::lex_less(EdgeId candidate_edge, NodeId candidate_parent, NodeId node) {
  const EdgeId current_edge = parent_[index(node)];
  NodeId a = candidate_parent;
  NodeId b = network_->source(current_edge);
  if (a == b) return index(candidate_edge) < index(current_edge);

  chain_a_.clear();
  chain_b_.clear();
  chain_a_.push_back(candidate_edge);
  chain_b_.push_back(current_edge);
  // Walk both parent chains back until they meet; the first differing edge
  // from the source side decides.
  while (a != b) {
    const EdgeId ea = parent_[index(a)];
    const EdgeId eb = parent_[index(b)];
    chain_a_.push_back(ea);
    chain_b_.push_back(eb);
    a = network_->source(ea);
    b = network_->source(eb);
  }
  for (std::size_t i = chain_a_.size(); i-- > 0;) {
    if (chain_a_[i] != chain_b_[i]) return index(chain_a_[i]) < index(chain_b_[i]);
  }
  return false;
}

std::optional<Path> ShortestPathSearch::run(NodeId s, NodeId t, const PreferenceVector& pref,
                                            double cost_bound) {
  const RoadNetwork& net = *network_;
  check_dim(net, pref);
  if (!net.contains(s) || !net.contains(t)) throw ValidationError("query node not in network");
  last_settled_ = 0;
  if (s == t) {
    last_cost_ = 0.0;
    return empty_path(s);
  }

  if (++generation_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    generation_ = 1;
  }
  const auto greater = [](const QueueEntry& x, const QueueEntry& y) {
    if (x.cost != y.cost) return x.cost > y.cost;
    if (x.hops != y.hops) return x.hops > y.hops;
    return x.node > y.node;
  };
  heap_.clear();

  const std::size_t d = net.cost_dim();
  const auto weights = pref.weights();
  const auto s_i = index(s);
  stamp_[s_i] = generation_;
  settled_[s_i] = 0;
  dist_[s_i] = 0.0;
  hops_[s_i] = 0;
  heap_.push_back({0.0, 0, s_i});

  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), greater);
    const QueueEntry top = heap_.back();
    heap_.pop_back();
    const std::uint32_t u = top.node;
    if (settled_[u] || top.cost != dist_[u] || top.hops != hops_[u]) continue;
    settled_[u] = 1;
    ++last_settled_;
    if (u == index(t)) break;

    for (const EdgeId e : net.out_edges(NodeId{u})) {
      const auto c = net.costs(e);
      double w = 0.0;
      for (std::size_t i = 0; i < d; ++i) w += weights[i] * c[i];
      assert(w >= 0.0);
      const double nd = top.cost + w;
      if (nd > cost_bound) continue;
      const std::uint32_t v = index(net.target(e));
      const std::uint32_t nh = top.hops + 1;
      if (!fresh(v)) {
        stamp_[v] = generation_;
        settled_[v] = 0;
      } else {
        if (settled_[v]) continue;
        if (nd > dist_[v]) continue;
        if (nd == dist_[v]) {
          if (nh > hops_[v]) continue;
          if (nh == hops_[v] && !lex_less(e, NodeId{u}, NodeId{v})) continue;
        }
      }
      dist_[v] = nd;
      hops_[v] = nh;
      parent_[v] = e;
      heap_.push_back({nd, nh, v});
      std::push_heap(heap_.begin(), heap_.end(), greater);
    }
  }

  const auto t_i = index(t);
  if (!fresh(t_i) || !settled_[t_i]) return std::nullopt;

  Path p;
  p.source = s;
  p.target = t;
  p.edges.resize(hops_[t_i]);
  NodeId cur = t;
  for (std::size_t i = p.edges.size(); i-- > 0;) {
    const EdgeId e = parent_[index(cur)];
    p.edges[i] = e;
    cur = net.source(e);
  }
  last_cost_ = dist_[t_i];
  return p;
}

Path shortest_path(const RoadNetwork& network, NodeId s, NodeId t, const PreferenceVector& pref) {
  ShortestPathSearch search(network);
  auto p = search.run(s, t, pref);
  if (!p) {
    throw NoPath("node " + std::to_string(network.node_label(t)) + " is unreachable from node " +
                 std::to_string(network.node_label(s)));
  }
  return std::move(*p);
}

}  // namespace prefmine
