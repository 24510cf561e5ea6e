#include "prefmine/pipeline.hpp"

#include <time.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "prefmine/error.hpp"
#include "text.hpp"

namespace prefmine::pipeline {

namespace {

using json = nlohmann::ordered_json;

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

class Stopwatch {
 public:
  Stopwatch() : wall_(std::chrono::steady_clock::now()), cpu_(thread_cpu_ms()) {}
  Timing elapsed() const {
    const auto wall = std::chrono::steady_clock::now() - wall_;
    return Timing{std::chrono::duration<double, std::milli>(wall).count(), thread_cpu_ms() - cpu_};
  }

 private:
  std::chrono::steady_clock::time_point wall_;
  double cpu_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::optional<double> mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join_positions(std::span<const std::size_t> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_weights(const PreferenceVector& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ' ';
    out += text::format_double(p[i]);
  }
  return out;
}

json weights_json(const PreferenceVector& p) { return json(std::vector<double>(p.weights().begin(), p.weights().end())); }

constexpr const char* kCsvHeader =
    "id,algorithm,brr,sr,sq,segmentable,rrro,rcrs,delta,iterations,wall_ms,cpu_ms,segments,"
    "boundaries,break_points,alpha,alpha_rrro\n";

struct CsvRow {
  std::string id, algorithm, brr, sr, sq, segmentable, rrro, rcrs, delta, iterations, wall_ms,
      cpu_ms, segments, boundaries, break_points, alpha, alpha_rrro;

  void write(std::ostream& out) const {
    const std::string* cols[] = {&id,         &algorithm, &brr,      &sr,       &sq,
                                 &segmentable, &rrro,      &rcrs,     &delta,    &iterations,
                                 &wall_ms,    &cpu_ms,    &segments, &boundaries, &break_points,
                                 &alpha,      &alpha_rrro};
    bool first = true;
    for (const auto* c : cols) {
      if (!first) out << ',';
      first = false;
      out << csv_field(*c);
    }
    out << '\n';
  }
};

SegmentRecord segment_one(std::vector<SegmentTester>& testers, const RoadNetwork& network,
                          const TrajectoryRecord& rec, std::size_t algo_pos,
                          const Algorithm& algo, const RunOptions& options) {
  const Stopwatch clock;
  SegmentTester& tester = testers[algo_pos];
  const std::size_t tests_before = tester.tests_run();

  SegmentRecord out;
  out.id = rec.id;
  out.algorithm = algo.label;
  const Trajectory traj = strip_self_loops(network, rec.trajectory);
  out.break_points = traj.break_points();
  if (traj.empty()) {
    out.segmentable = true;
  } else {
    try {
      Segmentation seg = segment(tester, traj, options.prefix_search);
      out.segmentable = true;
      out.boundaries = std::move(seg.boundaries);
      out.alphas = std::move(seg.per_segment_preference);
    } catch (const Unsegmentable&) {
      out.segmentable = false;
    }
  }
  if (!out.break_points.empty()) {
    out.score = eval::score_segmentation(out.break_points, out.boundaries, out.segmentable);
    out.distances = eval::distance_to_next_sp(traj, out.break_points, out.boundaries);
  }
  out.tests = tester.tests_run() - tests_before;
  out.timing = clock.elapsed();
  return out;
}

MineRecord mine_one(ShortestPathSearch& search, std::size_t traj_index,
                    const TrajectoryRecord& rec, const Algorithm& algo,
                    const RunOptions& options) {
  const Stopwatch clock;
  const RoadNetwork& net = search.network();
  const auto edges = rec.trajectory.edges();
  const bool round_trip = rec.trajectory.source() == rec.trajectory.target();

  MineRecord out{rec.id, algo.label, PreferenceVector::uniform(net.cost_dim()), std::nullopt,
                 std::nullopt, 0.0, 0.0, round_trip, 0, 0, {}};
  switch (algo.kind) {
    case Algorithm::Kind::Rdp: {
      const MiningResult r = recover_preference(search, edges, options.oracle);
      out.alpha = r.alpha;
      out.delta = r.delta;
      out.iterations = r.iterations;
      out.constraints = r.constraints_added;
      if (!round_trip) {
        out.rrro = eval::rrro(edges, r.recovered_route.edges);
        out.rcrs = eval::rcrs(net, edges, r.recovered_route.edges, r.alpha);
      }
      break;
    }
    case Algorithm::Kind::Ttp: {
      out.alpha = eval::ttp_preference(net.cost_dim(), algo.cost_index);
      const auto s = eval::score_preference(search, edges, out.alpha);
      out.rrro = s.rrro;
      out.rcrs = s.rcrs;
      break;
    }
    case Algorithm::Kind::Brp: {
      const auto by_rrro = eval::brp_preference(
          search, edges, eval::EvalFunction::Rrro,
          brp_seed(options.seed, traj_index, eval::EvalFunction::Rrro));
      const auto by_rcrs = eval::brp_preference(
          search, edges, eval::EvalFunction::Rcrs,
          brp_seed(options.seed, traj_index, eval::EvalFunction::Rcrs));
      out.alpha = by_rcrs.alpha;
      out.alpha_rrro = by_rrro.alpha;
      out.rrro = by_rrro.score;
      out.rcrs = by_rcrs.score;
      out.iterations = 2 * eval::kBrpCandidates;
      break;
    }
    default:
      throw ValidationError("`" + algo.label + "` is not a mining algorithm");
  }
  out.timing = clock.elapsed();
  return out;
}

}  // namespace

double oracle_epsilon_from_env(double fallback) {
  const char* raw = std::getenv("PREFMINE_EPS");
  if (!raw || !*raw) return fallback;
  const auto v = text::parse_double(text::trim(raw));
  if (!v || !std::isfinite(*v) || !(*v > 0.0)) {
    throw ValidationError(std::string("PREFMINE_EPS must be a positive number, got `") + raw + "`");
  }
  return *v;
}

Criterion Algorithm::criterion() const {
  if (kind == Kind::Ppts) return Criterion::personalized_path();
  if (kind == Kind::Opts) return Criterion::optimal_path(cost_index);
  throw ValidationError("`" + label + "` is not a segmentation algorithm");
}

Algorithm parse_algorithm(std::string_view label, const RoadNetwork& network) {
  auto cost = [&](std::string_view name) {
    const auto i = network.cost_index(name);
    if (!i) throw ValidationError("network has no cost type named `" + std::string(name) + "`");
    return *i;
  };
  const std::string l(label);
  if (l == "ppts") return {Algorithm::Kind::Ppts, 0, l};
  if (l == "rdp") return {Algorithm::Kind::Rdp, 0, l};
  if (l == "brp") return {Algorithm::Kind::Brp, 0, l};
  if (l == "ttp") return {Algorithm::Kind::Ttp, cost("travel_time"), l};
  if (l.rfind("opts:", 0) == 0) return {Algorithm::Kind::Opts, cost(l.substr(5)), l};
  if (l.rfind("ttp:", 0) == 0) return {Algorithm::Kind::Ttp, cost(l.substr(4)), l};
  throw ValidationError("unknown algorithm `" + l + "`");
}

std::vector<Algorithm> parse_algorithms(std::string_view labels, const RoadNetwork& network) {
  std::vector<Algorithm> out;
  for (const auto part : text::split(labels, ',')) {
    const auto name = text::trim(part);
    if (name.empty()) continue;
    if (name == "all") {
      out.push_back(parse_algorithm("ppts", network));
      for (const auto& c : network.cost_names()) out.push_back(parse_algorithm("opts:" + c, network));
      out.push_back(parse_algorithm("rdp", network));
      if (network.cost_index("travel_time")) out.push_back(parse_algorithm("ttp", network));
      out.push_back(parse_algorithm("brp", network));
      continue;
    }
    out.push_back(parse_algorithm(name, network));
  }
  if (out.empty()) throw ValidationError("no algorithm selected");
  return out;
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "jsonl") return OutputFormat::Jsonl;
  throw ValidationError("unknown output format `" + std::string(name) + "`");
}

std::vector<SegmentRecord> run_segment(const RoadNetwork& network,
                                       std::span<const TrajectoryRecord> trajectories,
                                       std::span<const Algorithm> algorithms,
                                       const RunOptions& options) {
  std::vector<const Algorithm*> algos;
  for (const auto& a : algorithms) {
    if (a.segments()) algos.push_back(&a);
  }
  const std::size_t per = algos.size();
  if (per == 0) return {};
  auto make_state = [&] {
    std::vector<SegmentTester> testers;
    testers.reserve(per);
    for (const auto* a : algos) testers.emplace_back(network, a->criterion(), options.oracle);
    return testers;
  };
  return parallel_map(trajectories.size() * per, options.workers, make_state,
                      [&](std::vector<SegmentTester>& testers, std::size_t i) {
                        const std::size_t a = i % per;
                        return segment_one(testers, network, trajectories[i / per], a, *algos[a],
                                           options);
                      });
}

std::vector<MineRecord> run_mine(const RoadNetwork& network,
                                 std::span<const TrajectoryRecord> trajectories,
                                 std::span<const Algorithm> algorithms, const RunOptions& options) {
  std::vector<const Algorithm*> algos;
  for (const auto& a : algorithms) {
    if (!a.segments()) algos.push_back(&a);
  }
  const std::size_t per = algos.size();
  if (per == 0) return {};
  return parallel_map(
      trajectories.size() * per, options.workers, [&] { return ShortestPathSearch(network); },
      [&](ShortestPathSearch& search, std::size_t i) {
        const std::size_t t = i / per;
        return mine_one(search, t, trajectories[t], *algos[i % per], options);
      });
}

std::uint64_t brp_seed(std::uint64_t base, std::size_t trajectory, eval::EvalFunction fn) {
  const std::uint64_t lane = fn == eval::EvalFunction::Rrro ? 0 : 1;
  return splitmix64(splitmix64(base) + 2 * static_cast<std::uint64_t>(trajectory) + lane);
}

std::vector<StitchedTrajectory> run_stitch(const RoadNetwork& network,
                                           std::span<const TimedTrajectory> trips,
                                           const StitchConfig& config, std::size_t workers) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    auto [it, inserted] = groups.try_emplace(trips[i].vehicle_id);
    if (inserted) order.push_back(trips[i].vehicle_id);
    it->second.push_back(i);
  }
  auto per_vehicle = parallel_map(
      order.size(), workers, [&] { return ShortestPathSearch(network); },
      [&](ShortestPathSearch& search, std::size_t v) {
        const auto& idx = groups.at(order[v]);
        std::vector<TimedTrajectory> mine;
        mine.reserve(idx.size());
        for (const std::size_t i : idx) mine.push_back(trips[i]);
        return stitch_vehicle(search, mine, config);
      });

  std::map<std::size_t, StitchedTrajectory> by_first_input;
  for (std::size_t v = 0; v < order.size(); ++v) {
    const auto& idx = groups.at(order[v]);
    std::size_t consumed = 0;
    for (auto& s : per_vehicle[v]) {
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

void write_segment_records(std::ostream& out, std::span<const SegmentRecord> records,
                           OutputFormat format, bool with_timing) {
  if (format == OutputFormat::Csv) {
    out << kCsvHeader;
    for (const auto& r : records) {
      CsvRow row;
      row.id = r.id;
      row.algorithm = r.algorithm;
      if (r.score) {
        row.brr = text::format_double(r.score->brr);
        row.sr = text::format_double(r.score->sr);
        row.sq = text::format_double(r.score->sq);
      }
      row.segmentable = r.segmentable ? "1" : "0";
      row.iterations = std::to_string(r.tests);
      if (with_timing) {
        row.wall_ms = text::format_double(r.timing.wall_ms);
        row.cpu_ms = text::format_double(r.timing.cpu_ms);
      }
      if (r.segmentable) row.segments = std::to_string(r.boundaries.size() + 1);
      row.boundaries = join_positions(r.boundaries);
      row.break_points = join_positions(r.break_points);
      for (std::size_t i = 0; i < r.alphas.size(); ++i) {
        if (i) row.alpha += '|';
        row.alpha += join_weights(r.alphas[i]);
      }
      row.write(out);
    }
    return;
  }
  for (const auto& r : records) {
    json j;
    j["id"] = r.id;
    j["algorithm"] = r.algorithm;
    j["segmentable"] = r.segmentable;
    if (r.segmentable) j["segments"] = r.boundaries.size() + 1;
    j["boundaries"] = r.boundaries;
    j["break_points"] = r.break_points;
    if (r.score) {
      j["brr"] = r.score->brr;
      j["sr"] = r.score->sr;
      j["sq"] = r.score->sq;
    }
    if (!r.alphas.empty()) {
      json alphas = json::array();
      for (const auto& a : r.alphas) alphas.push_back(weights_json(a));
      j["alphas"] = std::move(alphas);
    }
    j["tests"] = r.tests;
    if (with_timing) {
      j["wall_ms"] = r.timing.wall_ms;
      j["cpu_ms"] = r.timing.cpu_ms;
    }
    out << j.dump() << '\n';
  }
}

void write_mine_records(std::ostream& out, std::span<const MineRecord> records, OutputFormat format,
                        bool with_timing) {
  if (format == OutputFormat::Csv) {
    out << kCsvHeader;
    for (const auto& r : records) {
      CsvRow row;
      row.id = r.id;
      row.algorithm = r.algorithm;
      if (!r.round_trip) {
        row.rrro = text::format_double(r.rrro);
        row.rcrs = text::format_double(r.rcrs);
      }
      if (r.delta) row.delta = text::format_double(*r.delta);
      row.iterations = std::to_string(r.iterations);
      if (with_timing) {
        row.wall_ms = text::format_double(r.timing.wall_ms);
        row.cpu_ms = text::format_double(r.timing.cpu_ms);
      }
      row.alpha = join_weights(r.alpha);
      if (r.alpha_rrro) row.alpha_rrro = join_weights(*r.alpha_rrro);
      row.write(out);
    }
    return;
  }
  for (const auto& r : records) {
    json j;
    j["id"] = r.id;
    j["algorithm"] = r.algorithm;
    j["alpha"] = weights_json(r.alpha);
    if (r.alpha_rrro) j["alpha_rrro"] = weights_json(*r.alpha_rrro);
    if (r.delta) j["delta"] = *r.delta;
    j["round_trip"] = r.round_trip;
    if (!r.round_trip) {
      j["rrro"] = r.rrro;
      j["rcrs"] = r.rcrs;
    }
    j["iterations"] = r.iterations;
    j["constraints"] = r.constraints;
    if (with_timing) {
      j["wall_ms"] = r.timing.wall_ms;
      j["cpu_ms"] = r.timing.cpu_ms;
    }
    out << j.dump() << '\n';
  }
}

std::string segment_summary_json(std::span<const SegmentRecord> records,
                                 std::span<const Algorithm> algorithms) {
  std::vector<std::string> labels;
  for (const auto& a : algorithms) {
    if (a.segments()) labels.push_back(a.label);
  }

  // Trajectories with break points that every listed algorithm segmented.
  std::map<std::string, std::size_t> segmented_by;
  std::map<std::string, bool> has_breaks;
  for (const auto& r : records) {
    has_breaks[r.id] = !r.break_points.empty();
    if (r.segmentable) ++segmented_by[r.id];
  }
  auto common = [&](const std::string& id) {
    const auto it = segmented_by.find(id);
    return has_breaks[id] && it != segmented_by.end() && it->second == labels.size();
  };
  std::size_t with_breaks = 0;
  std::size_t common_count = 0;
  for (const auto& [id, b] : has_breaks) {
    with_breaks += b ? 1 : 0;
    common_count += common(id) ? 1 : 0;
  }

  json algos = json::array();
  for (const auto& label : labels) {
    std::vector<bool> seg_flags;
    std::vector<double> brr_all, brr_c, sr_c, sq_c, segments;
    std::vector<std::optional<std::size_t>> distances;
    for (const auto& r : records) {
      if (r.algorithm != label) continue;
      seg_flags.push_back(r.segmentable);
      if (r.segmentable) segments.push_back(static_cast<double>(r.boundaries.size() + 1));
      if (!r.score) continue;
      brr_all.push_back(r.score->brr);
      distances.insert(distances.end(), r.distances.begin(), r.distances.end());
      if (common(r.id)) {
        brr_c.push_back(r.score->brr);
        sr_c.push_back(r.score->sr);
        sq_c.push_back(r.score->sq);
      }
    }
    const auto flags = std::make_unique<bool[]>(seg_flags.size());
    std::copy(seg_flags.begin(), seg_flags.end(), flags.get());
    const std::span<const bool> flag_span(flags.get(), seg_flags.size());
    std::size_t infinite = 0;
    for (const auto& d : distances) infinite += d ? 0 : 1;

    json a;
    a["algorithm"] = label;
    a["trajectories"] = seg_flags.size();
    a["s_score"] = eval::s_score(flag_span);
    a["brr_all"] = opt_number(mean(brr_all));
    a["mean_segments"] = opt_number(mean(segments));
    a["brr"] = opt_number(mean(brr_c));
    a["sr"] = opt_number(mean(sr_c));
    a["sq"] = opt_number(mean(sq_c));
    a["distance_cdf"] = eval::distance_cdf(distances, kCdfMaxHops);
    a["distance_infinite"] =
        distances.empty() ? json(nullptr)
                          : json(static_cast<double>(infinite) / static_cast<double>(distances.size()));
    algos.push_back(std::move(a));
  }

  json j;
  j["kind"] = "segmentation";
  j["trajectories"] = has_breaks.size();
  j["with_break_points"] = with_breaks;
  j["commonly_segmentable"] = common_count;
  j["algorithms"] = std::move(algos);
  return j.dump(2) + "\n";
}

std::string mine_summary_json(std::span<const MineRecord> records,
                              std::span<const Algorithm> algorithms) {
  json algos = json::array();
  std::size_t trajectories = 0;
  for (const auto& alg : algorithms) {
    if (alg.segments()) continue;
    std::vector<double> rrro, rcrs, delta, iters;
    std::size_t count = 0;
    std::size_t round_trips = 0;
    for (const auto& r : records) {
      if (r.algorithm != alg.label) continue;
      ++count;
      iters.push_back(static_cast<double>(r.iterations));
      if (r.delta) delta.push_back(*r.delta);
      if (r.round_trip) {
        ++round_trips;
        continue;
      }
      rrro.push_back(r.rrro);
      rcrs.push_back(r.rcrs);
    }
    trajectories = std::max(trajectories, count);
    json a;
    a["algorithm"] = alg.label;
    a["trajectories"] = count;
    a["round_trips"] = round_trips;
    a["rrro"] = opt_number(mean(rrro));
    a["rcrs"] = opt_number(mean(rcrs));
    if (alg.kind == Algorithm::Kind::Rdp) a["delta"] = opt_number(mean(delta));
    a["mean_iterations"] = opt_number(mean(iters));
    algos.push_back(std::move(a));
  }
  json j;
  j["kind"] = "mining";
  j["trajectories"] = trajectories;
  j["algorithms"] = std::move(algos);
  return j.dump(2) + "\n";
}

LatencyStats latency_stats(std::vector<double> samples) {
  if (samples.empty()) return {};
  std::sort(samples.begin(), samples.end());
  auto quantile = [&](double q) {
    const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(samples.size())));
    return samples[std::min(samples.size() - 1, i == 0 ? 0 : i - 1)];
  };
  return LatencyStats{*mean(samples), quantile(0.5), quantile(0.99)};
}

BenchReport run_bench(const RoadNetwork& network, std::span<const TrajectoryRecord> trajectories,
                      const Algorithm& algorithm, const RunOptions& options) {
  RunOptions timed = options;
  timed.record_timing = true;
  const std::span<const Algorithm> one(&algorithm, 1);
  std::vector<double> cpu;
  std::vector<double> wall;
  const auto start = std::chrono::steady_clock::now();
  if (algorithm.segments()) {
    for (const auto& r : run_segment(network, trajectories, one, timed)) {
      cpu.push_back(r.timing.cpu_ms);
      wall.push_back(r.timing.wall_ms);
    }
  } else {
    for (const auto& r : run_mine(network, trajectories, one, timed)) {
      cpu.push_back(r.timing.cpu_ms);
      wall.push_back(r.timing.wall_ms);
    }
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  BenchReport rep;
  rep.algorithm = algorithm.label;
  rep.workers = options.workers;
  rep.nodes = network.num_nodes();
  rep.edges = network.num_edges();
  rep.trajectories = trajectories.size();
  rep.cpu_ms = latency_stats(std::move(cpu));
  rep.wall_ms = latency_stats(std::move(wall));
  rep.total_wall_s = total;
  rep.trajectories_per_s = total > 0.0 ? static_cast<double>(trajectories.size()) / total : 0.0;
  return rep;
}

std::string bench_json(std::span<const BenchReport> reports) {
  auto stats = [](const LatencyStats& s) {
    json j;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["p99"] = s.p99;
    return j;
  };
  json arr = json::array();
  for (const auto& r : reports) {
    json j;
    j["algorithm"] = r.algorithm;
    j["workers"] = r.workers;
    j["nodes"] = r.nodes;
    j["edges"] = r.edges;
    j["trajectories"] = r.trajectories;
    j["cpu_ms"] = stats(r.cpu_ms);
    j["wall_ms"] = stats(r.wall_ms);
    j["total_wall_s"] = r.total_wall_s;
    j["trajectories_per_s"] = r.trajectories_per_s;
    arr.push_back(std::move(j));
  }
  json j;
  j["kind"] = "bench";
  j["hardware_threads"] = std::thread::hardware_concurrency();
  j["runs"] = std::move(arr);
  return j.dump(2) + "\n";
}

}  // namespace prefmine::pipeline
