#include "prefmine/trajectory.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "prefmine/error.hpp"
#include "text.hpp"

namespace prefmine {

Trajectory::Trajectory(const RoadNetwork& network, std::vector<EdgeId> edges,
                       std::vector<std::size_t> break_points,
                       std::optional<std::vector<double>> timestamps)
    : edges_(std::move(edges)) {
  if (edges_.empty()) throw ValidationError("trajectory has no edges");
  nodes_.reserve(edges_.size() + 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const EdgeId e = edges_[i];
    if (!network.contains(e)) throw UnknownEdge("unknown edge index " + std::to_string(index(e)));
    if (i == 0) {
      nodes_.push_back(network.source(e));
    } else if (network.source(e) != nodes_.back()) {
      throw ValidationError("trajectory is disconnected at edge " +
                            std::to_string(network.edge_label(e)));
    }
    nodes_.push_back(network.target(e));
  }
  set_break_points(std::move(break_points));
  if (timestamps) {
    if (timestamps->size() != edges_.size()) {
      throw ValidationError("trajectory needs one timestamp per edge");
    }
    if (!std::is_sorted(timestamps->begin(), timestamps->end())) {
      throw ValidationError("trajectory timestamps decrease");
    }
    timestamps_ = std::move(timestamps);
  }
}

Trajectory Trajectory::stationary(NodeId node) {
  Trajectory t;
  t.nodes_.push_back(node);
  return t;
}

void Trajectory::set_break_points(std::vector<std::size_t> positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  if (!positions.empty() && positions.back() >= nodes_.size()) {
    throw ValidationError("break point " + std::to_string(positions.back()) +
                          " is outside the trajectory");
  }
  break_points_ = std::move(positions);
}

std::span<const EdgeId> Trajectory::slice(std::size_t from, std::size_t to) const {
  if (from >= to || to >= nodes_.size()) throw ValidationError("invalid trajectory slice");
  return std::span(edges_).subspan(from, to - from);
}

Trajectory strip_self_loops(const RoadNetwork& network, const Trajectory& traj) {
  Trajectory out;
  out.nodes_.push_back(traj.source());
  // removed_before[p]: self-loops among the first p edges.
  std::vector<std::size_t> removed_before(traj.num_nodes(), 0);
  std::vector<double> times;
  for (std::size_t i = 0; i < traj.num_edges(); ++i) {
    const EdgeId e = traj.edges_[i];
    const bool loop = network.source(e) == network.target(e);
    removed_before[i + 1] = removed_before[i] + (loop ? 1 : 0);
    if (loop) continue;
    out.edges_.push_back(e);
    out.nodes_.push_back(network.target(e));
    if (traj.timestamps_) times.push_back((*traj.timestamps_)[i]);
  }
  std::vector<std::size_t> bps;
  for (const std::size_t p : traj.break_points_) bps.push_back(p - removed_before[p]);
  out.set_break_points(std::move(bps));
  if (traj.timestamps_) out.timestamps_ = std::move(times);
  return out;
}

namespace {

std::int64_t edge_label_or_throw(std::string_view tok, std::size_t line_no) {
  const auto v = text::parse_int(tok);
  if (!v) throw ParseError("malformed edge id `" + std::string(tok) + "`", line_no);
  return *v;
}

}  // namespace

std::vector<TrajectoryRecord> load_trajectories(std::istream& in, const RoadNetwork& network) {
  struct Pending {
    std::string id;
    std::vector<EdgeId> edges;
    std::vector<std::size_t> bps;
    std::optional<std::vector<double>> ts;
    std::optional<TripMeta> meta;
    std::optional<PreferenceVector> pref;
    std::size_t line = 0;
  };
  std::vector<Pending> pending;
  std::unordered_map<std::string, std::size_t> by_id;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank_or_comment(line)) continue;
    const auto tok = text::split_ws(line);
    const std::string_view kind = tok[0];
    if (tok.size() < 2) throw ParseError("record without trajectory id", line_no);
    const std::string id(tok[1]);

    if (kind == "traj") {
      if (by_id.count(id)) throw ParseError("duplicate trajectory id " + id, line_no);
      Pending p;
      p.id = id;
      p.line = line_no;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto label = edge_label_or_throw(tok[i], line_no);
        const auto e = network.find_edge(label);
        if (!e) throw ParseError("unknown edge id " + std::to_string(label), line_no);
        p.edges.push_back(*e);
      }
      by_id.emplace(id, pending.size());
      pending.push_back(std::move(p));
      continue;
    }

    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ParseError("`" + std::string(kind) + "` refers to unknown trajectory " + id, line_no);
    }
    Pending& p = pending[it->second];
    if (kind == "bp") {
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto v = text::parse_int(tok[i]);
        if (!v || *v < 0) throw ParseError("malformed break point", line_no);
        p.bps.push_back(static_cast<std::size_t>(*v));
      }
    } else if (kind == "ts") {
      std::vector<double> ts;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto v = text::parse_double(tok[i]);
        if (!v) throw ParseError("malformed timestamp", line_no);
        ts.push_back(*v);
      }
      p.ts = std::move(ts);
    } else if (kind == "meta") {
      if (tok.size() != 5) throw ParseError("`meta` takes id, vehicle, start, end", line_no);
      const auto start = text::parse_double(tok[3]);
      const auto end = text::parse_double(tok[4]);
      if (!start || !end) throw ParseError("malformed meta times", line_no);
      if (*start > *end) throw ParseError("trip ends before it starts", line_no);
      p.meta = TripMeta{std::string(tok[2]), *start, *end};
    } else if (kind == "pref") {
      std::vector<double> w;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto v = text::parse_double(tok[i]);
        if (!v) throw ParseError("malformed preference weight", line_no);
        w.push_back(*v);
      }
      if (w.size() != network.cost_dim()) throw ParseError("`pref` dimension differs from d", line_no);
      try {
        p.pref = PreferenceVector(std::move(w));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no);
      }
    } else {
      throw ParseError("unknown record `" + std::string(kind) + "`", line_no);
    }
  }

  std::vector<TrajectoryRecord> out;
  out.reserve(pending.size());
  for (auto& p : pending) {
    try {
      out.push_back(TrajectoryRecord{
          p.id, Trajectory(network, std::move(p.edges), std::move(p.bps), std::move(p.ts)),
          std::move(p.meta), std::move(p.pref)});
    } catch (const DataError& e) {
      throw ParseError("trajectory " + p.id + ": " + e.what(), p.line);
    }
  }
  return out;
}

std::vector<TrajectoryRecord> load_trajectories_file(const std::string& path,
                                                     const RoadNetwork& network) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trajectory file " + path);
  return load_trajectories(in, network);
}

void save_trajectories(std::ostream& out, const RoadNetwork& network,
                       std::span<const TrajectoryRecord> records) {
  for (const auto& r : records) {
    out << "traj " << r.id;
    for (const EdgeId e : r.trajectory.edges()) out << ' ' << network.edge_label(e);
    out << '\n';
    if (!r.trajectory.break_points().empty()) {
      out << "bp " << r.id;
      for (const auto p : r.trajectory.break_points()) out << ' ' << p;
      out << '\n';
    }
    if (r.trajectory.timestamps()) {
      out << "ts " << r.id;
      for (const double t : *r.trajectory.timestamps()) out << ' ' << text::format_double(t);
      out << '\n';
    }
    if (r.meta) {
      out << "meta " << r.id << ' ' << r.meta->vehicle_id << ' '
          << text::format_double(r.meta->start_time) << ' '
          << text::format_double(r.meta->end_time) << '\n';
    }
    if (r.planted) {
      out << "pref " << r.id;
      for (const double w : r.planted->weights()) out << ' ' << text::format_double(w);
      out << '\n';
    }
  }
}

void save_trajectories_file(const std::string& path, const RoadNetwork& network,
                            std::span<const TrajectoryRecord> records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trajectory file " + path);
  save_trajectories(out, network, records);
}

}  // namespace prefmine
