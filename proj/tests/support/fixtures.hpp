#pragma once

// Small hand-built inputs shared by the unit suites and the acceptance runner.

#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prefmine/stitching.hpp"

namespace prefmine::testing {

/// Chain 0-1-...-8 with a `length_m` dimension. Edge 11 (1->2) is 150 m,
/// edges 14-16 (4->5->6->7) are 300 m each; every other link is 500 m.
RoadNetwork stitch_chain_network();

TimedTrajectory timed(const RoadNetwork& net, std::string id, std::string vehicle,
                      std::vector<std::int64_t> edge_labels, double start, double end);

struct StitchTrace {
  std::string name;
  std::vector<TimedTrajectory> trips;
  std::size_t expected_outputs;
  std::vector<std::size_t> expected_break_points;
  std::vector<std::int64_t> expected_edges;
  double expected_end_time;
};

/// Shared endpoint after 10 minutes, a 45 minute gap, and a chain of three.
std::vector<StitchTrace> stitch_traces(const RoadNetwork& net);

/// Empty when `trace` stitches as expected, else a description of the mismatch.
std::string check_stitch_trace(const RoadNetwork& net, const StitchTrace& trace);

/// Time-ordered trips of several vehicles, consecutive trips often adjacent.
std::vector<TimedTrajectory> random_vehicle_history(const RoadNetwork& net, Rng& rng,
                                                    std::size_t vehicles, std::size_t trips);

/// Edge and break conservation of a stitch: every input edge appears once in
/// order, the only extra edges are connectors, each output has one break
/// point per joined trip. Empty when all hold.
std::string check_stitch_conservation(const RoadNetwork& net,
                                      const std::vector<TimedTrajectory>& trips,
                                      const std::vector<StitchedTrajectory>& out);

}  // namespace prefmine::testing
