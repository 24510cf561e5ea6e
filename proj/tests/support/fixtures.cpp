#include "fixtures.hpp"

#include <map>
#include <sstream>

namespace prefmine::testing {

RoadNetwork stitch_chain_network() {
  NetworkBuilder b({"travel_time", std::string(kLengthCostName)});
  for (int n = 0; n <= 8; ++n) b.add_node(n);
  const double lengths[] = {500, 150, 500, 500, 300, 300, 300, 500};
  for (int i = 0; i < 8; ++i) {
    const double c[] = {lengths[i] / 10.0, lengths[i]};
    b.add_edge(10 + i, i, i + 1, c);
  }
  return std::move(b).build();
}

TimedTrajectory timed(const RoadNetwork& net, std::string id, std::string vehicle,
                      std::vector<std::int64_t> edge_labels, double start, double end) {
  std::vector<EdgeId> edges;
  for (const auto l : edge_labels) edges.push_back(*net.find_edge(l));
  return TimedTrajectory{std::move(id), std::move(vehicle), Trajectory(net, std::move(edges)), start,
                         end};
}

std::vector<StitchTrace> stitch_traces(const RoadNetwork& net) {
  std::vector<StitchTrace> out;
  out.push_back({"shared endpoint, 10 min gap",
                 {timed(net, "a", "v", {10}, 0, 300), timed(net, "b", "v", {11, 12}, 900, 1200)},
                 1,
                 {1},
                 {10, 11, 12},
                 1200});
  out.push_back({"45 min gap",
                 {timed(net, "a", "v", {10}, 0, 300), timed(net, "b", "v", {11, 12}, 3000, 3300)},
                 2,
                 {},
                 {10},
                 300});
  // a ends at 1, b starts at 2 (one 150 m connector), c starts where b ends.
  out.push_back({"chain of three",
                 {timed(net, "a", "v", {10}, 0, 300), timed(net, "b", "v", {12}, 900, 1200),
                  timed(net, "c", "v", {13}, 1800, 2100)},
                 1,
                 {2, 3},
                 {10, 11, 12, 13},
                 2100});
  return out;
}

std::string check_stitch_trace(const RoadNetwork& net, const StitchTrace& trace) {
  const auto out = stitch_all(net, trace.trips);
  std::ostringstream err;
  if (out.size() != trace.expected_outputs) {
    err << trace.name << ": " << out.size() << " outputs, expected " << trace.expected_outputs;
    return err.str();
  }
  const auto& first = out.front();
  if (first.break_points != trace.expected_break_points ||
      first.trajectory.break_points() != trace.expected_break_points) {
    err << trace.name << ": break points differ";
    return err.str();
  }
  std::vector<std::int64_t> labels;
  for (const EdgeId e : first.trajectory.edges()) labels.push_back(net.edge_label(e));
  if (labels != trace.expected_edges) {
    err << trace.name << ": edge sequence differs";
    return err.str();
  }
  if (first.end_time != trace.expected_end_time || first.start_time != trace.trips[0].start_time) {
    err << trace.name << ": times differ";
    return err.str();
  }
  return {};
}

std::vector<TimedTrajectory> random_vehicle_history(const RoadNetwork& net, Rng& rng,
                                                    std::size_t vehicles, std::size_t trips) {
  std::vector<TimedTrajectory> out;
  std::vector<double> clock(vehicles, 0.0);
  std::vector<std::optional<NodeId>> at(vehicles);
  for (std::size_t i = 0; i < trips; ++i) {
    const std::size_t v = below(rng, vehicles);
    std::vector<EdgeId> walk;
    // Continue from the last position, one hop away, or anywhere.
    const auto mode = below(rng, 3);
    std::optional<NodeId> from = at[v];
    if (from && mode == 1 && !net.out_edges(*from).empty()) {
      const auto hop = net.out_edges(*from);
      from = net.target(hop[below(rng, hop.size())]);
    } else if (mode == 2) {
      from.reset();
    }
    for (int attempt = 0; attempt < 20 && walk.empty(); ++attempt) {
      if (from) {
        NodeId cur = *from;
        const std::size_t len = 1 + below(rng, 5);
        for (std::size_t k = 0; k < len && !net.out_edges(cur).empty(); ++k) {
          const auto outs = net.out_edges(cur);
          const EdgeId e = outs[below(rng, outs.size())];
          walk.push_back(e);
          cur = net.target(e);
        }
        if (walk.empty()) from.reset();
      } else {
        walk = random_walk(net, rng, 1 + below(rng, 5));
      }
    }
    if (walk.empty()) continue;
    const double start = clock[v] + uniform(rng, 0, 3600);
    const double end = start + 60.0 * static_cast<double>(walk.size());
    clock[v] = end;
    Trajectory traj(net, std::move(walk));
    at[v] = traj.target();
    out.push_back(TimedTrajectory{"t" + std::to_string(i), "v" + std::to_string(v),
                                  std::move(traj), start, end});
  }
  return out;
}

std::string check_stitch_conservation(const RoadNetwork& net,
                                      const std::vector<TimedTrajectory>& trips,
                                      const std::vector<StitchedTrajectory>& out) {
  std::map<std::string, const TimedTrajectory*> by_id;
  for (const auto& t : trips) by_id[t.id] = &t;
  std::size_t consumed = 0;
  std::size_t in_edges = 0;
  for (const auto& t : trips) in_edges += t.trajectory.num_edges();
  std::size_t out_edges = 0;
  std::size_t connectors = 0;
  for (const auto& s : out) {
    out_edges += s.trajectory.num_edges();
    connectors += s.stitch_edges.size();
    if (s.break_points.size() + 1 != s.source_ids.size()) return s.id + ": break count";
    if (s.trajectory.break_points() != s.break_points) return s.id + ": trajectory break points";
    // Walk the merged edges, skipping connectors, against the source trips.
    std::vector<EdgeId> own;
    std::size_t c = 0;
    for (std::size_t j = 0; j < s.trajectory.num_edges(); ++j) {
      if (c < s.stitch_edges.size() && s.stitch_edges[c] == j) {
        ++c;
        continue;
      }
      own.push_back(s.trajectory.edges()[j]);
    }
    std::vector<EdgeId> expect;
    for (std::size_t k = 0; k < s.source_ids.size(); ++k) {
      const auto* t = by_id.at(s.source_ids[k]);
      if (t->vehicle_id != s.vehicle_id) return s.id + ": mixed vehicles";
      expect.insert(expect.end(), t->trajectory.edges().begin(), t->trajectory.edges().end());
      if (k > 0) {
        const std::size_t bp = s.break_points[k - 1];
        if (s.trajectory.nodes()[bp] != t->trajectory.source()) return s.id + ": break position";
      }
    }
    if (own != expect) return s.id + ": edge conservation";
    if (s.end_time != by_id.at(s.source_ids.back())->end_time) return s.id + ": end time";
    for (const std::size_t j : s.stitch_edges) {
      if (j >= s.trajectory.num_edges()) return s.id + ": connector index";
    }
    consumed += s.source_ids.size();
  }
  if (consumed != trips.size()) return "trip count not conserved";
  if (out_edges != in_edges + connectors) return "edge count not conserved";
  (void)net;
  return {};
}

}  // namespace prefmine::testing
