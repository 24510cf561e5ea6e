#include "prefmine/synth.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <utility>

#include "prefmine/error.hpp"
#include "prefmine/eval.hpp"

namespace prefmine::synth {

namespace {

// Stream offsets keep the network, corpus and noise draws independent, so
// changing the trajectory count leaves the network untouched.
constexpr std::uint64_t kCorpusStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kNoiseStream = 0xbf58476d1ce4e5b9ULL;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::size_t informative_dims(const SynthConfig& cfg) {
  return cfg.cost_dim - (cfg.include_unit_dim ? 1 : 0);
}

PreferenceVector draw_preference(const SynthConfig& cfg, std::size_t d, std::mt19937_64& rng) {
  if (cfg.preference_pool.empty()) return eval::sample_simplex(d, rng);
  return cfg.preference_pool[pick(rng, cfg.preference_pool.size())];
}

std::pair<NodeId, NodeId> distinct_pair(std::mt19937_64& rng, std::size_t n) {
  const auto s = static_cast<std::uint32_t>(pick(rng, n));
  auto t = static_cast<std::uint32_t>(pick(rng, n - 1));
  if (t >= s) ++t;
  return {NodeId{s}, NodeId{t}};
}

void append(std::vector<EdgeId>& out, const Path& p) {
  out.insert(out.end(), p.edges.begin(), p.edges.end());
}

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.grid_w == 0 || cfg.grid_h == 0) throw ValidationError("grid must be nonempty");
  if (cfg.grid_w * cfg.grid_h < 2) throw ValidationError("grid needs at least two nodes");
  if (cfg.cost_dim == 0) throw ValidationError("cost dimension must be positive");
  if (cfg.include_unit_dim && cfg.cost_dim < 2) {
    throw ValidationError("a unit dimension needs at least one informative cost beside it");
  }
  for (const auto& r : cfg.cost_ranges) {
    if (!(r.lo >= 0.0) || !(r.hi >= r.lo)) throw ValidationError("invalid cost range");
  }
  if (cfg.via_min > cfg.via_max) throw ValidationError("via_min exceeds via_max");
  if (cfg.noise < 0.0 || cfg.noise >= 1.0) throw ValidationError("noise must lie in [0, 1)");
  for (const auto& p : cfg.preference_pool) {
    if (p.dim() != cfg.cost_dim) throw DimensionMismatch("preference pool dimension differs from d");
  }
}

std::vector<std::string> cost_names(const SynthConfig& cfg) {
  static const char* const kNames[] = {"travel_time", "congestion", "crowdedness"};
  std::vector<std::string> names;
  const std::size_t m = informative_dims(cfg);
  for (std::size_t i = 0; i < m; ++i) {
    names.push_back(i < 3 ? std::string(kNames[i]) : "cost" + std::to_string(i));
  }
  if (cfg.include_unit_dim) names.emplace_back("intersections");
  return names;
}

GridNetwork generate_grid(const SynthConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  const std::size_t w = cfg.grid_w;
  const std::size_t h = cfg.grid_h;
  const std::size_t m = informative_dims(cfg);
  auto node = [w](std::size_t x, std::size_t y) { return static_cast<std::int64_t>(y * w + x); };

  NetworkBuilder builder(cost_names(cfg));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) builder.add_node(node(x, y));
  }

  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<double>> drawn;
  std::int64_t label = 0;
  auto add = [&](std::int64_t from, std::int64_t to, std::vector<double> c) {
    if (cfg.include_unit_dim) c.push_back(1.0);
    builder.add_edge(label++, from, to, c);
    drawn[{from, to}] = std::move(c);
  };
  auto draw = [&] {
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) {
      const CostRange r = i < cfg.cost_ranges.size() ? cfg.cost_ranges[i] : CostRange{};
      c[i] = r.lo + (r.hi - r.lo) * unit(rng);
    }
    return c;
  };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (x + 1 < w) {
        add(node(x, y), node(x + 1, y), draw());
        add(node(x + 1, y), node(x, y), draw());
      }
      if (y + 1 < h) {
        add(node(x, y), node(x, y + 1), draw());
        add(node(x, y + 1), node(x, y), draw());
      }
    }
  }

  std::vector<std::int64_t> dominated_labels;
  if (cfg.dominated_edges > 0 && w > 1 && h > 1) {
    std::vector<std::size_t> cells((w - 1) * (h - 1));
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
    const std::size_t n = std::min(cfg.dominated_edges, cells.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(cells[i], cells[i + pick(rng, cells.size() - i)]);
      const std::size_t x = cells[i] % (w - 1);
      const std::size_t y = cells[i] / (w - 1);
      const auto& a = drawn.at({node(x, y), node(x + 1, y)});
      const auto& b = drawn.at({node(x + 1, y), node(x + 1, y + 1)});
      std::vector<double> c(m);
      for (std::size_t j = 0; j < m; ++j) c[j] = 2.0 * (a[j] + b[j]) + 1.0;
      dominated_labels.push_back(label);
      add(node(x, y), node(x + 1, y + 1), std::move(c));
    }
  }

  GridNetwork out{normalize_costs(std::move(builder).build()), {}};
  for (const auto l : dominated_labels) out.dominated.push_back(*out.network.find_edge(l));
  return out;
}

RoadNetwork generate_grid_network(const SynthConfig& cfg) { return generate_grid(cfg).network; }

RoadNetwork perturb_costs(const RoadNetwork& network, double noise, std::uint64_t seed) {
  if (noise < 0.0 || noise >= 1.0) throw ValidationError("noise must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::vector<double> costs(network.cost_table().begin(), network.cost_table().end());
  for (double& c : costs) c *= 1.0 + noise * (2.0 * unit(rng) - 1.0);
  return network.with_costs(std::move(costs), network.cost_scales());
}

Trajectory generate_personalized_trajectory(ShortestPathSearch& search,
                                            const PreferenceVector& alpha, NodeId s, NodeId t) {
  if (s == t) throw ValidationError("personalized trajectory needs distinct endpoints");
  auto path = search.run(s, t, alpha);
  if (!path) throw NoPath("no route between the requested endpoints");
  return Trajectory(search.network(), std::move(path->edges));
}

StitchedSample generate_stitched_trajectory(ShortestPathSearch& search,
                                            std::span<const NodeId> stops,
                                            std::span<const PreferenceVector> alphas,
                                            const std::string& id, const std::string& vehicle,
                                            double start_time, double gap_s, double edge_time_s) {
  if (stops.size() < 2) throw ValidationError("a stitched trajectory needs at least two stops");
  if (alphas.size() != stops.size() - 1) {
    throw ValidationError("need one preference per leg");
  }
  const RoadNetwork& net = search.network();
  StitchedSample sample;
  std::vector<EdgeId> all;
  std::vector<std::size_t> breaks;
  double t = start_time;
  for (std::size_t leg = 0; leg + 1 < stops.size(); ++leg) {
    Trajectory traj = generate_personalized_trajectory(search, alphas[leg], stops[leg], stops[leg + 1]);
    std::vector<double> ts(traj.num_edges());
    for (std::size_t j = 0; j < ts.size(); ++j) ts[j] = t + edge_time_s * static_cast<double>(j);
    const double end = t + edge_time_s * static_cast<double>(traj.num_edges());
    if (leg > 0) breaks.push_back(all.size());
    all.insert(all.end(), traj.edges().begin(), traj.edges().end());
    std::vector<EdgeId> edges(traj.edges().begin(), traj.edges().end());
    sample.legs.push_back(TimedTrajectory{id + "_" + std::to_string(leg), vehicle,
                                          Trajectory(net, std::move(edges), {}, std::move(ts)), t,
                                          end});
    t = end + gap_s;
  }
  sample.full = Trajectory(net, std::move(all), std::move(breaks));
  return sample;
}

std::vector<TrajectoryRecord> planted_corpus(const RoadNetwork& network, const SynthConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed ^ kCorpusStream);
  const RoadNetwork noisy =
      cfg.noise > 0.0 ? perturb_costs(network, cfg.noise, cfg.seed ^ kNoiseStream) : network;
  ShortestPathSearch search(noisy);
  std::vector<TrajectoryRecord> out;
  out.reserve(cfg.num_trajectories);
  for (std::size_t i = 0; i < cfg.num_trajectories; ++i) {
    const auto [s, t] = distinct_pair(rng, network.num_nodes());
    PreferenceVector alpha = draw_preference(cfg, network.cost_dim(), rng);
    Trajectory traj = generate_personalized_trajectory(search, alpha, s, t);
    std::vector<EdgeId> edges(traj.edges().begin(), traj.edges().end());
    out.push_back(TrajectoryRecord{"p" + std::to_string(i), Trajectory(network, std::move(edges)),
                                   std::nullopt, std::move(alpha)});
  }
  return out;
}

StitchedCorpus stitched_corpus(const RoadNetwork& network, const SynthConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed ^ kCorpusStream);
  const RoadNetwork noisy =
      cfg.noise > 0.0 ? perturb_costs(network, cfg.noise, cfg.seed ^ kNoiseStream) : network;
  ShortestPathSearch search(noisy);
  const std::size_t n = network.num_nodes();
  const std::size_t d = network.cost_dim();
  constexpr int kViaAttempts = 100;

  StitchedCorpus corpus;
  for (std::size_t i = 0; i < cfg.num_trajectories; ++i) {
    const std::size_t vias = cfg.via_min + pick(rng, cfg.via_max - cfg.via_min + 1);
    const auto [s, t] = distinct_pair(rng, n);
    std::vector<NodeId> stops{s};
    std::vector<PreferenceVector> alphas;
    for (std::size_t v = 0; v < vias; ++v) {
      alphas.push_back(draw_preference(cfg, d, rng));
      const bool off_path = unit(rng) < cfg.off_path_probability;
      std::vector<std::uint8_t> on_route(n, 0);
      if (off_path) {
        if (const auto direct = search.run(stops.back(), t, alphas.back())) {
          for (const EdgeId e : direct->edges) on_route[index(noisy.target(e))] = 1;
        }
      }
      NodeId via{};
      for (int attempt = 0; attempt < kViaAttempts; ++attempt) {
        via = NodeId{static_cast<std::uint32_t>(pick(rng, n))};
        if (via != stops.back() && via != t && !on_route[index(via)]) break;
      }
      if (via == stops.back() || via == t) continue;
      stops.push_back(via);
    }
    alphas.erase(alphas.begin() + static_cast<std::ptrdiff_t>(stops.size() - 1), alphas.end());
    alphas.push_back(draw_preference(cfg, d, rng));
    stops.push_back(t);

    const std::string id = "s" + std::to_string(i);
    const std::string vehicle = "v" + std::to_string(i);
    const double start = 3600.0 * static_cast<double>(i);
    StitchedSample sample = generate_stitched_trajectory(search, stops, alphas, id, vehicle, start,
                                                         cfg.leg_gap_s, cfg.edge_time_s);
    for (auto& leg : sample.legs) {
      std::vector<EdgeId> edges(leg.trajectory.edges().begin(), leg.trajectory.edges().end());
      corpus.legs.push_back(TrajectoryRecord{
          leg.id,
          Trajectory(network, std::move(edges), {}, leg.trajectory.timestamps()),
          TripMeta{vehicle, leg.start_time, leg.end_time}, std::nullopt});
    }
    std::vector<EdgeId> edges(sample.full.edges().begin(), sample.full.edges().end());
    corpus.truth.push_back(TrajectoryRecord{
        id, Trajectory(network, std::move(edges), sample.full.break_points()),
        TripMeta{vehicle, sample.legs.front().start_time, sample.legs.back().end_time},
        std::nullopt});
  }
  return corpus;
}

std::vector<TrajectoryRecord> dominated_corpus(const GridNetwork& grid, const SynthConfig& cfg) {
  validate(cfg);
  if (grid.dominated.empty()) throw ValidationError("network has no dominated edges");
  const RoadNetwork& net = grid.network;
  std::mt19937_64 rng(cfg.seed ^ kCorpusStream);
  ShortestPathSearch search(net);
  std::vector<TrajectoryRecord> out;
  out.reserve(cfg.num_trajectories);
  for (std::size_t i = 0; i < cfg.num_trajectories; ++i) {
    const EdgeId shortcut = grid.dominated[pick(rng, grid.dominated.size())];
    const auto alpha = draw_preference(cfg, net.cost_dim(), rng);
    const NodeId s{static_cast<std::uint32_t>(pick(rng, net.num_nodes()))};
    const NodeId t{static_cast<std::uint32_t>(pick(rng, net.num_nodes()))};
    std::vector<EdgeId> edges;
    if (auto lead = search.run(s, net.source(shortcut), alpha)) append(edges, *lead);
    edges.push_back(shortcut);
    if (auto tail = search.run(net.target(shortcut), t, alpha)) append(edges, *tail);
    out.push_back(TrajectoryRecord{"d" + std::to_string(i), Trajectory(net, std::move(edges)),
                                   std::nullopt, std::nullopt});
  }
  return out;
}

}  // namespace prefmine::synth
