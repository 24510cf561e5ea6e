#include "prefmine/stitching.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "prefmine/error.hpp"

namespace prefmine {

namespace {

std::optional<std::size_t> resolve_length_dim(const RoadNetwork& network,
                                              const StitchConfig& config) {
  if (config.length_dim) {
    if (*config.length_dim >= network.cost_dim()) {
      throw ValidationError("stitch length dimension out of range");
    }
    return config.length_dim;
  }
  return network.cost_index(kLengthCostName);
}

std::optional<std::vector<double>> merged_times(const Trajectory& a, std::size_t connector_len,
                                                const Trajectory& b) {
  if (!a.timestamps() || !b.timestamps()) return std::nullopt;
  std::vector<double> ts = *a.timestamps();
  const double resume = b.timestamps()->front();
  ts.insert(ts.end(), connector_len, resume);
  ts.insert(ts.end(), b.timestamps()->begin(), b.timestamps()->end());
  if (!std::is_sorted(ts.begin(), ts.end())) return std::nullopt;
  return ts;
}

StitchedTrajectory start_from(const TimedTrajectory& trip) {
  StitchedTrajectory s;
  s.id = trip.id;
  s.vehicle_id = trip.vehicle_id;
  s.trajectory = trip.trajectory;
  s.source_ids.push_back(trip.id);
  s.start_time = trip.start_time;
  s.end_time = trip.end_time;
  return s;
}

void stitch_into(const RoadNetwork& network, StitchedTrajectory& current, const Path& connector,
                 const TimedTrajectory& next) {
  const Trajectory& a = current.trajectory;
  const Trajectory& b = next.trajectory;
  const std::size_t offset = a.num_edges();
  const std::size_t resume = offset + connector.hops();

  std::vector<EdgeId> edges(a.edges().begin(), a.edges().end());
  edges.insert(edges.end(), connector.edges.begin(), connector.edges.end());
  edges.insert(edges.end(), b.edges().begin(), b.edges().end());

  std::vector<std::size_t> bps = a.break_points();
  bps.push_back(resume);
  for (const std::size_t p : b.break_points()) bps.push_back(resume + p);

  auto times = merged_times(a, connector.hops(), b);
  for (std::size_t j = 0; j < connector.hops(); ++j) current.stitch_edges.push_back(offset + j);
  current.break_points.push_back(resume);
  current.trajectory = Trajectory(network, std::move(edges), std::move(bps), std::move(times));
  current.source_ids.push_back(next.id);
  current.end_time = next.end_time;
}

}  // namespace

std::optional<Path> pseudo_connected(ShortestPathSearch& search, const Trajectory& t1,
                                     const Trajectory& t2, const StitchConfig& config) {
  const RoadNetwork& net = search.network();
  const NodeId v = t1.target();
  const NodeId w = t2.source();
  if (v == w) return empty_path(v);

  const auto length_dim = resolve_length_dim(net, config);
  if (!length_dim) {
    for (const EdgeId e : net.out_edges(v)) {
      if (net.target(e) == w) return make_path(net, {e});
    }
    return std::nullopt;
  }

  auto route = search.run(v, w, PreferenceVector::unit(net.cost_dim(), *length_dim));
  if (!route) return std::nullopt;
  if (route->hops() <= 1) return route;
  const double meters =
      path_cost_vector(net, route->edges)[*length_dim] * net.cost_scales()[*length_dim];
  if (meters < config.len_max_m) return route;
  return std::nullopt;
}

std::optional<Path> pseudo_connected(const RoadNetwork& network, const Trajectory& t1,
                                     const Trajectory& t2, const StitchConfig& config) {
  ShortestPathSearch search(network);
  return pseudo_connected(search, t1, t2, config);
}

std::vector<StitchedTrajectory> stitch_vehicle(ShortestPathSearch& search,
                                               std::span<const TimedTrajectory> trips,
                                               const StitchConfig& config) {
  std::vector<StitchedTrajectory> out;
  if (trips.empty()) return out;
  for (std::size_t i = 1; i < trips.size(); ++i) {
    if (trips[i].start_time < trips[i - 1].start_time) {
      throw UnsortedInput("trip " + trips[i].id + " of vehicle " + trips[i].vehicle_id +
                          " starts before its predecessor");
    }
  }

  StitchedTrajectory current = start_from(trips.front());
  for (std::size_t i = 1; i < trips.size(); ++i) {
    const TimedTrajectory& next = trips[i];
    std::optional<Path> connector;
    if (next.start_time - current.end_time <= config.gap_max_s) {
      connector = pseudo_connected(search, current.trajectory, next.trajectory, config);
    }
    if (connector) {
      stitch_into(search.network(), current, *connector, next);
    } else {
      out.push_back(std::move(current));
      current = start_from(next);
    }
  }
  out.push_back(std::move(current));
  return out;
}

std::vector<StitchedTrajectory> stitch_all(const RoadNetwork& network,
                                           std::span<const TimedTrajectory> trips,
                                           const StitchConfig& config) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    auto [it, inserted] = groups.try_emplace(trips[i].vehicle_id);
    if (inserted) order.push_back(trips[i].vehicle_id);
    it->second.push_back(i);
  }

  ShortestPathSearch search(network);
  std::map<std::size_t, StitchedTrajectory> by_first_input;
  for (const auto& vehicle : order) {
    const auto& idx = groups[vehicle];
    std::vector<TimedTrajectory> mine;
    mine.reserve(idx.size());
    for (const std::size_t i : idx) mine.push_back(trips[i]);
    auto stitched = stitch_vehicle(search, mine, config);
    std::size_t consumed = 0;
    for (auto& s : stitched) {
      const std::size_t first = idx[consumed];
      consumed += s.source_ids.size();
      by_first_input.emplace(first, std::move(s));
    }
  }

  std::vector<StitchedTrajectory> out;
  out.reserve(by_first_input.size());
  for (auto& [_, s] : by_first_input) out.push_back(std::move(s));
  return out;
}

std::vector<TimedTrajectory> timed_trajectories(std::span<const TrajectoryRecord> records) {
  std::vector<TimedTrajectory> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.meta) throw ValidationError("trajectory " + r.id + " has no `meta` record");
    out.push_back(
        TimedTrajectory{r.id, r.meta->vehicle_id, r.trajectory, r.meta->start_time, r.meta->end_time});
  }
  return out;
}

TrajectoryRecord to_record(const StitchedTrajectory& stitched) {
  return TrajectoryRecord{stitched.id, stitched.trajectory,
                          TripMeta{stitched.vehicle_id, stitched.start_time, stitched.end_time},
                          std::nullopt};
}

}  // namespace prefmine
