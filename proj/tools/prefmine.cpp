// prefmine: batch front end for stitching, segmentation and preference mining.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prefmine/costs.hpp"
#include "prefmine/error.hpp"
#include "prefmine/graph.hpp"
#include "prefmine/pipeline.hpp"
#include "prefmine/stitching.hpp"
#include "prefmine/synth.hpp"
#include "prefmine/trajectory.hpp"

namespace {

using namespace prefmine;

constexpr int kExitUsage = 1;

// Writes to a file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-" || path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw DataError("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_text(const std::string& path, const std::string& body) {
  Output out(path);
  out.stream() << body;
}

struct Common {
  std::string network;
  std::string trajectories;
  std::string out = "-";
  std::string summary;
  std::string algo;
  std::string format = "csv";
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  bool linear = false;
  bool record_timing = false;
};

pipeline::RunOptions run_options(const Common& c) {
  pipeline::RunOptions o;
  o.workers = c.workers;
  o.seed = c.seed;
  o.oracle.epsilon = pipeline::oracle_epsilon_from_env();
  o.prefix_search = c.linear ? PrefixSearch::Linear : PrefixSearch::Galloping;
  o.record_timing = c.record_timing;
  return o;
}

void add_inputs(CLI::App* app, Common& c) {
  app->add_option("--network", c.network, "Network file")->required();
  app->add_option("--trajectories", c.trajectories, "Trajectory file")->required();
}

void add_run_flags(CLI::App* app, Common& c) {
  app->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--out", c.out, "Output path, - for stdout");
}

// `all` keeps the algorithms the subcommand runs; naming another kind is an error.
std::vector<pipeline::Algorithm> algorithms_of_kind(const std::string& labels,
                                                    const RoadNetwork& net, bool segmenting) {
  auto algos = pipeline::parse_algorithms(labels, net);
  if (labels == "all") {
    std::erase_if(algos, [&](const auto& a) { return a.segments() != segmenting; });
    return algos;
  }
  for (const auto& a : algos) {
    if (a.segments() != segmenting) {
      throw ValidationError("`" + a.label + "` " +
                            (segmenting ? "does not segment; use `mine`" : "segments; use `segment`"));
    }
  }
  return algos;
}

int cmd_segment(const Common& c) {
  const RoadNetwork net = load_network_file(c.network);
  const auto trajs = load_trajectories_file(c.trajectories, net);
  const auto algos = algorithms_of_kind(c.algo, net, true);
  const auto format = pipeline::parse_format(c.format);
  const auto records = pipeline::run_segment(net, trajs, algos, run_options(c));
  Output out(c.out);
  pipeline::write_segment_records(out.stream(), records, format, c.record_timing);
  if (!c.summary.empty()) write_text(c.summary, pipeline::segment_summary_json(records, algos));
  return 0;
}

int cmd_mine(const Common& c) {
  const RoadNetwork net = load_network_file(c.network);
  const auto trajs = load_trajectories_file(c.trajectories, net);
  const auto algos = algorithms_of_kind(c.algo, net, false);
  const auto format = pipeline::parse_format(c.format);
  const auto records = pipeline::run_mine(net, trajs, algos, run_options(c));
  Output out(c.out);
  pipeline::write_mine_records(out.stream(), records, format, c.record_timing);
  if (!c.summary.empty()) write_text(c.summary, pipeline::mine_summary_json(records, algos));
  return 0;
}

int cmd_eval(const Common& c, const std::string& dist_out) {
  const RoadNetwork net = load_network_file(c.network);
  const auto trajs = load_trajectories_file(c.trajectories, net);
  const auto algos = pipeline::parse_algorithms(c.algo, net);
  const auto opts = run_options(c);
  const auto seg = pipeline::run_segment(net, trajs, algos, opts);
  const auto mined = pipeline::run_mine(net, trajs, algos, opts);

  nlohmann::ordered_json body;
  body["segmentation"] = nlohmann::ordered_json::parse(pipeline::segment_summary_json(seg, algos));
  body["mining"] = nlohmann::ordered_json::parse(pipeline::mine_summary_json(mined, algos));
  write_text(c.out, body.dump(2) + "\n");

  if (!dist_out.empty()) {
    Output out(dist_out);
    out.stream() << "algorithm,hops,fraction\n";
    for (const auto& a : algos) {
      if (!a.segments()) continue;
      std::vector<std::optional<std::size_t>> d;
      for (const auto& r : seg) {
        if (r.algorithm == a.label) d.insert(d.end(), r.distances.begin(), r.distances.end());
      }
      const auto cdf = eval::distance_cdf(d, pipeline::kCdfMaxHops);
      for (std::size_t h = 0; h < cdf.size(); ++h) {
        out.stream() << a.label << ',' << h << ',' << cdf[h] << '\n';
      }
    }
  }
  return 0;
}

int cmd_bench(const Common& c, const std::vector<std::size_t>& worker_counts) {
  const RoadNetwork net = load_network_file(c.network);
  const auto trajs = load_trajectories_file(c.trajectories, net);
  const auto algos = pipeline::parse_algorithms(c.algo, net);
  std::vector<pipeline::BenchReport> reports;
  for (const auto& a : algos) {
    for (const std::size_t w : worker_counts) {
      auto opts = run_options(c);
      opts.workers = w;
      reports.push_back(pipeline::run_bench(net, trajs, a, opts));
    }
  }
  write_text(c.out, pipeline::bench_json(reports));
  return 0;
}

int cmd_stitch(const Common& c, double gap_max_min, double len_m) {
  const RoadNetwork net = load_network_file(c.network);
  const auto records = load_trajectories_file(c.trajectories, net);
  StitchConfig cfg;
  cfg.gap_max_s = gap_max_min * 60.0;
  cfg.len_max_m = len_m;
  const auto stitched = pipeline::run_stitch(net, timed_trajectories(records), cfg, c.workers);
  std::vector<TrajectoryRecord> out_records;
  out_records.reserve(stitched.size());
  for (const auto& s : stitched) out_records.push_back(to_record(s));
  Output out(c.out);
  save_trajectories(out.stream(), net, out_records);
  return 0;
}

struct SynthArgs {
  synth::SynthConfig cfg;
  std::string kind = "planted";
  std::string network_out;
  std::string trajectories_out;
  std::string truth_out;
};

int cmd_synth(const SynthArgs& a) {
  const synth::GridNetwork grid = synth::generate_grid(a.cfg);
  save_network_file(a.network_out, grid.network);
  if (a.trajectories_out.empty()) return 0;
  if (a.kind == "planted") {
    save_trajectories_file(a.trajectories_out, grid.network,
                           synth::planted_corpus(grid.network, a.cfg));
  } else if (a.kind == "stitched") {
    const auto corpus = synth::stitched_corpus(grid.network, a.cfg);
    save_trajectories_file(a.trajectories_out, grid.network, corpus.legs);
    if (!a.truth_out.empty()) save_trajectories_file(a.truth_out, grid.network, corpus.truth);
  } else {
    save_trajectories_file(a.trajectories_out, grid.network, synth::dominated_corpus(grid, a.cfg));
  }
  return 0;
}

struct CostArgs {
  std::string topology;
  std::string attributes;
  std::string points;
  std::string geometry;
  std::string out = "-";
  costs::DerivationOptions opts;
  bool raw = false;
};

int cmd_costs(CostArgs a) {
  const RoadNetwork topo = load_network_file(a.topology);
  std::ifstream attr_in(a.attributes);
  if (!attr_in) throw DataError("cannot open " + a.attributes);
  auto attrs = costs::load_edge_attributes(attr_in);
  std::ifstream pts_in(a.points);
  if (!pts_in) throw DataError("cannot open " + a.points);
  const costs::PointSet points(costs::load_points(pts_in));
  std::ifstream geo_in(a.geometry);
  if (!geo_in) throw DataError("cannot open " + a.geometry);
  costs::load_edge_geometry(geo_in, attrs);
  a.opts.normalize = !a.raw;
  Output out(a.out);
  save_network(out.stream(), costs::derive_cost_network(topo, attrs, points, a.opts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driving-preference mining and trajectory segmentation"};
  app.require_subcommand(1);

  Common c;
  double gap_max_min = 30.0;
  double len_m = 200.0;
  std::string dist_out;
  std::vector<std::size_t> bench_workers;
  SynthArgs sa;
  CostArgs ca;

  auto* segment = app.add_subcommand("segment", "Segment trajectories (ppts, opts:<cost>)");
  add_inputs(segment, c);
  add_run_flags(segment, c);
  segment->add_option("--algo", c.algo, "Comma-separated criteria")->default_val("ppts");
  segment->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  segment->add_option("--summary", c.summary, "Aggregate JSON path");
  segment->add_flag("--linear", c.linear, "Linear prefix scan instead of galloping search");
  segment->add_flag("--record-timing", c.record_timing, "Include per-trajectory timings");

  auto* mine = app.add_subcommand("mine", "Recover driving preferences (rdp, ttp, brp)");
  add_inputs(mine, c);
  add_run_flags(mine, c);
  mine->add_option("--algo", c.algo, "Comma-separated algorithms")->default_val("rdp");
  mine->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  mine->add_option("--summary", c.summary, "Aggregate JSON path");
  mine->add_flag("--record-timing", c.record_timing, "Include per-trajectory timings");

  auto* evalc = app.add_subcommand("eval", "Aggregate segmentation and mining scores");
  add_inputs(evalc, c);
  add_run_flags(evalc, c);
  evalc->add_option("--algo", c.algo, "Comma-separated algorithms or `all`")->default_val("all");
  evalc->add_option("--dist-out", dist_out, "Break-point distance CDF as CSV");

  auto* bench = app.add_subcommand("bench", "Per-trajectory latency report");
  add_inputs(bench, c);
  add_run_flags(bench, c);
  bench->add_option("--algo", c.algo, "Comma-separated algorithms")->default_val("ppts,rdp");
  bench->add_option("--bench-workers", bench_workers, "Worker counts to compare")
      ->delimiter(',');

  auto* stitch = app.add_subcommand("stitch", "Stitch consecutive trips per vehicle");
  add_inputs(stitch, c);
  add_run_flags(stitch, c);
  stitch->add_option("--gap-max-min", gap_max_min, "Largest gap between trips, minutes");
  stitch->add_option("--stitch-len-m", len_m, "Connector length limit, meters");

  auto* synthc = app.add_subcommand("synth", "Generate a grid network and trajectories");
  synthc->add_option("--network", sa.network_out, "Network output path")->required();
  synthc->add_option("--trajectories", sa.trajectories_out, "Trajectory output path");
  synthc->add_option("--truth", sa.truth_out, "Stitched ground truth output path");
  synthc->add_option("--kind", sa.kind, "planted, stitched or dominated")
      ->check(CLI::IsMember({"planted", "stitched", "dominated"}));
  synthc->add_option("--grid-w", sa.cfg.grid_w, "Grid width");
  synthc->add_option("--grid-h", sa.cfg.grid_h, "Grid height");
  synthc->add_option("--dim", sa.cfg.cost_dim, "Cost types, unit dimension included");
  bool no_unit = false;
  synthc->add_flag("--no-unit", no_unit, "Leave out the unit cost dimension");
  synthc->add_option("--count", sa.cfg.num_trajectories, "Trajectories to generate");
  synthc->add_option("--via-min", sa.cfg.via_min, "Fewest via points per stitched trajectory");
  synthc->add_option("--via-max", sa.cfg.via_max, "Most via points per stitched trajectory");
  synthc->add_option("--off-path", sa.cfg.off_path_probability, "Chance a via point is forced off-path");
  synthc->add_option("--gap-s", sa.cfg.leg_gap_s, "Pause between legs, seconds");
  synthc->add_option("--noise", sa.cfg.noise, "Relative cost noise when generating routes");
  synthc->add_option("--dominated", sa.cfg.dominated_edges, "Dominated shortcut edges to plant");
  synthc->add_option("--seed", sa.cfg.seed, "Random seed");

  auto* costsc = app.add_subcommand("costs", "Derive cost types from edge attributes");
  costsc->add_option("--network", ca.topology, "Topology network file")->required();
  costsc->add_option("--attributes", ca.attributes, "Edge attribute CSV")->required();
  costsc->add_option("--points", ca.points, "Point file for crowdedness")->required();
  costsc->add_option("--geometry", ca.geometry, "Edge geometry file")->required();
  costsc->add_option("--out", ca.out, "Output network path");
  costsc->add_option("--confidence", ca.opts.confidence_k, "Weight of the model estimate");
  costsc->add_option("--grid", ca.opts.grid_w, "Crowdedness grid cells per side");
  costsc->add_flag("--raw", ca.raw, "Skip normalization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*segment) return cmd_segment(c);
    if (*mine) return cmd_mine(c);
    if (*evalc) return cmd_eval(c, dist_out);
    if (*bench) {
      if (bench_workers.empty()) bench_workers.push_back(c.workers);
      return cmd_bench(c, bench_workers);
    }
    if (*stitch) return cmd_stitch(c, gap_max_min, len_m);
    if (*synthc) {
      sa.cfg.include_unit_dim = !no_unit;
      return cmd_synth(sa);
    }
    if (*costsc) {
      ca.opts.grid_h = ca.opts.grid_w;
      return cmd_costs(ca);
    }
  } catch (const DataError& e) {
    std::fprintf(stderr, "prefmine: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "prefmine: internal error: %s\n", e.what());
    return 3;
  }
  return kExitUsage;
}
