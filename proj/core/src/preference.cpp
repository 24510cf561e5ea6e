#include "prefmine/preference.hpp"

#include <algorithm>
#include <string>

#include "prefmine/error.hpp"

namespace prefmine {

namespace {

std::vector<double> simplex_row(std::size_t d, std::size_t num_vars, double sign) {
  std::vector<double> row(num_vars, 0.0);
  std::fill_n(row.begin(), d, sign);
  return row;
}

// sum(alpha) = 1 as a pair of inequalities.
void add_simplex_rows(lp::LinearProgram& program, std::size_t d) {
  program.add_constraint(simplex_row(d, program.num_vars(), 1.0), lp::Relation::LessEqual, 1.0);
  program.add_constraint(simplex_row(d, program.num_vars(), -1.0), lp::Relation::LessEqual, -1.0);
}

constexpr std::size_t kCenteringRounds = 64;

[[noreturn]] void diverged(std::size_t cap) {
  throw OracleDivergence("separation oracle did not converge within " + std::to_string(cap) +
                         " rounds");
}

// Among the preferences under which the path stays optimal, moves alpha to
// one that beats every known alternative by the widest margin, so the
// recomputed route is the path itself rather than an equal-cost rival.
// Alternatives are collected from Dijkstra as they come up. Returns nullopt
// when no better-centered preference is confirmed within `rounds`.
std::optional<PreferenceVector> center_preference(ShortestPathSearch& search,
                                                  std::span<const EdgeId> edges,
                                                  const PathSummary& summary,
                                                  std::vector<std::vector<double>> cuts,
                                                  PreferenceVector alpha, double delta,
                                                  double lp_tolerance, std::size_t rounds) {
  const std::size_t d = summary.costs.size();
  const RoadNetwork& net = search.network();
  for (std::size_t round = 0; round < rounds; ++round) {
    auto route = search.run(summary.source, summary.target, alpha);
    if (!route) return std::nullopt;
    if (std::equal(route->edges.begin(), route->edges.end(), edges.begin(), edges.end())) {
      return alpha;
    }
    const CostVector other = path_cost_vector(net, route->edges);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < d; ++i) row[i] = summary.costs[i] - other[i];
    if (std::find(cuts.begin(), cuts.end(), row) != cuts.end()) return std::nullopt;
    cuts.push_back(std::move(row));

    // Variables: alpha_1..alpha_d, margin.
    lp::LinearProgram program(d + 1);
    std::vector<double> objective(d + 1, 0.0);
    objective[d] = -1.0;
    program.set_objective(std::move(objective));
    add_simplex_rows(program, d);
    std::vector<double> cap(d + 1, 0.0);
    cap[d] = 1.0;
    program.add_constraint(std::move(cap), lp::Relation::LessEqual, 1.0);
    for (const auto& c : cuts) {
      std::vector<double> r(c);
      r.push_back(1.0);
      program.add_constraint(std::move(r), lp::Relation::LessEqual, delta);
    }
    const lp::Solution sol = lp::solve(program, lp_tolerance);
    if (sol.status != lp::Status::Optimal || sol.values[d] <= 0.0) return std::nullopt;
    alpha = PreferenceVector::from_unnormalized(std::span(sol.values).first(d));
  }
  return std::nullopt;
}

}  // namespace

PathSummary summarize_path(const RoadNetwork& network, std::span<const EdgeId> edges) {
  const Path p = make_path(network, std::vector<EdgeId>(edges.begin(), edges.end()));
  return PathSummary{p.source, p.target, path_cost_vector(network, p.edges)};
}

OracleOutcome oracle_round(ShortestPathSearch& search, const PathSummary& path,
                           const PreferenceVector& alpha, double delta, double epsilon) {
  const double path_cost = personalized_cost(path.costs, alpha);
  // Only routes cheaper than this can violate; the search never expands
  // labels above it.
  const double bound = path_cost - delta - 0.5 * epsilon;
  if (bound < 0.0) return OracleConverged{delta};

  auto best = search.run(path.source, path.target, alpha, bound);
  if (!best) return OracleConverged{delta};

  const CostVector best_costs = path_cost_vector(search.network(), best->edges);
  std::vector<double> coeffs(path.costs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = path.costs[i] - best_costs[i];
  const double violation = personalized_cost(coeffs, alpha);
  if (violation <= delta + epsilon) return OracleConverged{delta};
  return OracleCut{std::move(coeffs), violation, std::move(*best)};
}

FeasibilityResult decide_personalized_path(ShortestPathSearch& search,
                                           std::span<const EdgeId> edges,
                                           const OracleOptions& options) {
  const PathSummary summary = summarize_path(search.network(), edges);
  const std::size_t d = summary.costs.size();

  lp::LinearProgram program(d);
  add_simplex_rows(program, d);

  FeasibilityResult result;
  PreferenceVector alpha = PreferenceVector::uniform(d);
  while (result.iterations < options.max_iterations) {
    ++result.iterations;
    auto outcome = oracle_round(search, summary, alpha, 0.0, options.epsilon);
    if (std::holds_alternative<OracleConverged>(outcome)) {
      result.alpha = std::move(alpha);
      return result;
    }
    auto& cut = std::get<OracleCut>(outcome);
    program.add_constraint(std::move(cut.coeffs), lp::Relation::LessEqual, 0.0);
    const lp::Solution sol = lp::solve(program, options.lp_tolerance);
    if (sol.status != lp::Status::Optimal) return result;
    alpha = PreferenceVector::from_unnormalized(sol.values);
  }
  diverged(options.max_iterations);
}

std::optional<PreferenceVector> is_personalized_path(const RoadNetwork& network,
                                                     std::span<const EdgeId> edges,
                                                     const OracleOptions& options) {
  ShortestPathSearch search(network);
  return decide_personalized_path(search, edges, options).alpha;
}

MiningResult recover_preference(ShortestPathSearch& search, std::span<const EdgeId> edges,
                                const OracleOptions& options) {
  const PathSummary summary = summarize_path(search.network(), edges);
  const std::size_t d = summary.costs.size();

  // Variables: alpha_1..alpha_d, delta.
  lp::LinearProgram program(d + 1);
  std::vector<double> objective(d + 1, 0.0);
  objective[d] = 1.0;
  program.set_objective(std::move(objective));
  add_simplex_rows(program, d);

  PreferenceVector alpha = PreferenceVector::uniform(d);
  double delta = 0.0;
  std::size_t iterations = 0;
  std::vector<std::vector<double>> cuts;
  for (;;) {
    if (iterations == options.max_iterations) diverged(options.max_iterations);
    ++iterations;
    auto outcome = oracle_round(search, summary, alpha, delta, options.epsilon);
    if (std::holds_alternative<OracleConverged>(outcome)) break;

    auto& cut = std::get<OracleCut>(outcome);
    cuts.push_back(cut.coeffs);
    cut.coeffs.push_back(-1.0);
    program.add_constraint(std::move(cut.coeffs), lp::Relation::LessEqual, 0.0);
    const lp::Solution sol = lp::solve(program, options.lp_tolerance);
    if (sol.status != lp::Status::Optimal) {
      // delta is unbounded above, so the program always has a solution.
      throw NumericalFailure("robust mining LP reported no optimum");
    }
    alpha = PreferenceVector::from_unnormalized(std::span(sol.values).first(d));
    delta = std::max(sol.values[d], 0.0);
  }

  if (delta <= options.epsilon && summary.source != summary.target) {
    auto centered = center_preference(search, edges, summary, std::move(cuts), alpha, delta,
                                      options.lp_tolerance, kCenteringRounds);
    if (centered) alpha = std::move(*centered);
  }

  auto route = search.run(summary.source, summary.target, alpha);
  if (!route) throw NoPath("trajectory endpoints are disconnected");
  MiningResult result{std::move(alpha), delta, std::move(*route), iterations,
                      program.num_constraints() - 2, summary.source == summary.target};
  return result;
}

MiningResult recover_preference(const RoadNetwork& network, std::span<const EdgeId> edges,
                                const OracleOptions& options) {
  ShortestPathSearch search(network);
  return recover_preference(search, edges, options);
}

}  // namespace prefmine
