#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "prefmine/eval.hpp"
#include "prefmine/graph.hpp"
#include "prefmine/preference.hpp"
#include "prefmine/segmentation.hpp"
#include "prefmine/stitching.hpp"
#include "prefmine/trajectory.hpp"

namespace prefmine::pipeline {

/// Calls `fn(state, i)` for every i in [0, n) on up to `workers` threads, each
/// with its own `make_state()`. Results come back in index order; if any call
/// throws, the exception of the lowest index is rethrown after all workers stop.
template <class MakeState, class Fn>
auto parallel_map(std::size_t n, std::size_t workers, MakeState make_state, Fn fn) {
  using State = decltype(make_state());
  using Result = decltype(fn(std::declval<State&>(), std::size_t{}));
  std::vector<std::optional<Result>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    State state = make_state();
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(state, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, n));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Oracle tolerance from PREFMINE_EPS, or `fallback` when unset. Throws
/// ValidationError for a malformed or nonpositive value.
double oracle_epsilon_from_env(double fallback = kOracleTolerance);

struct Algorithm {
  enum class Kind { Ppts, Opts, Rdp, Ttp, Brp };
  Kind kind = Kind::Ppts;
  /// Cost type for Opts and Ttp.
  std::size_t cost_index = 0;
  std::string label;

  bool segments() const noexcept { return kind == Kind::Ppts || kind == Kind::Opts; }
  Criterion criterion() const;
};

/// ppts, opts:<cost>, rdp, ttp, ttp:<cost> or brp. ttp defaults to the
/// `travel_time` cost type.
Algorithm parse_algorithm(std::string_view label, const RoadNetwork& network);
/// Comma-separated list; `all` expands to ppts, every opts variant, rdp, ttp
/// (when travel_time exists) and brp.
std::vector<Algorithm> parse_algorithms(std::string_view labels, const RoadNetwork& network);

enum class OutputFormat { Csv, Jsonl };
OutputFormat parse_format(std::string_view name);

struct RunOptions {
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  OracleOptions oracle{};
  PrefixSearch prefix_search = PrefixSearch::Galloping;
  /// Wall and CPU times vary between runs; they are left out of records
  /// unless asked for so that outputs stay byte-identical.
  bool record_timing = false;
};

struct Timing {
  double wall_ms = 0.0;
  /// Thread CPU time.
  double cpu_ms = 0.0;
};

struct SegmentRecord {
  std::string id;
  std::string algorithm;
  bool segmentable = false;
  std::vector<std::size_t> boundaries;
  std::vector<PreferenceVector> alphas;
  /// Break points after self-loop removal.
  std::vector<std::size_t> break_points;
  std::optional<eval::SegmentationScore> score;
  std::vector<std::optional<std::size_t>> distances;
  std::size_t tests = 0;
  Timing timing;
};

/// Strips self-loops and segments every trajectory under every segmentation
/// algorithm. Records are ordered by trajectory, then algorithm.
std::vector<SegmentRecord> run_segment(const RoadNetwork& network,
                                       std::span<const TrajectoryRecord> trajectories,
                                       std::span<const Algorithm> algorithms,
                                       const RunOptions& options);

struct MineRecord {
  std::string id;
  std::string algorithm;
  PreferenceVector alpha;
  /// BRP picks a separate preference for RRRO.
  std::optional<PreferenceVector> alpha_rrro;
  std::optional<double> delta;
  double rrro = 0.0;
  double rcrs = 0.0;
  bool round_trip = false;
  std::size_t iterations = 0;
  std::size_t constraints = 0;
  Timing timing;
};

std::vector<MineRecord> run_mine(const RoadNetwork& network,
                                 std::span<const TrajectoryRecord> trajectories,
                                 std::span<const Algorithm> algorithms, const RunOptions& options);

/// Per-trajectory BRP seed, independent of scheduling.
std::uint64_t brp_seed(std::uint64_t base, std::size_t trajectory, eval::EvalFunction fn);

/// Vehicles are stitched in parallel; output follows stitch_all's order.
std::vector<StitchedTrajectory> run_stitch(const RoadNetwork& network,
                                           std::span<const TimedTrajectory> trips,
                                           const StitchConfig& config, std::size_t workers);

void write_segment_records(std::ostream& out, std::span<const SegmentRecord> records,
                           OutputFormat format, bool with_timing);
void write_mine_records(std::ostream& out, std::span<const MineRecord> records, OutputFormat format,
                        bool with_timing);

/// Per-algorithm means: S-score and BRR over all trajectories
/// with break points, then BRR, SR and SQ over the trajectories every listed
/// algorithm could segment; plus the break-to-segmentation-point distance CDF.
std::string segment_summary_json(std::span<const SegmentRecord> records,
                                 std::span<const Algorithm> algorithms);
/// Per-algorithm mean RRRO and RCRS over non-round-trip trajectories.
std::string mine_summary_json(std::span<const MineRecord> records,
                              std::span<const Algorithm> algorithms);

inline constexpr std::size_t kCdfMaxHops = 5;

struct LatencyStats {
  double mean = 0.0;
  double median = 0.0;
  double p99 = 0.0;
};

LatencyStats latency_stats(std::vector<double> samples);

struct BenchReport {
  std::string algorithm;
  std::size_t workers = 1;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t trajectories = 0;
  LatencyStats cpu_ms;
  LatencyStats wall_ms;
  double total_wall_s = 0.0;
  double trajectories_per_s = 0.0;
};

/// Times one algorithm over the corpus with `options.workers` workers.
BenchReport run_bench(const RoadNetwork& network, std::span<const TrajectoryRecord> trajectories,
                      const Algorithm& algorithm, const RunOptions& options);
std::string bench_json(std::span<const BenchReport> reports);

}  // namespace prefmine::pipeline
