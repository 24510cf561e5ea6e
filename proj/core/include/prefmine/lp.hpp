#pragma once

#include <cstddef>
#include <vector>

namespace prefmine::lp {

/// Default feasibility tolerance for solve().
inline constexpr double kFeasibilityTolerance = 1e-7;

enum class Relation { LessEqual, Equal };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// Minimize `objective . x` subject to the constraints and x >= 0.
///
/// Meant for a handful of variables and up to a few hundred rows, which is
/// what the preference programs need.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }

  /// Throws DimensionMismatch when the length differs from num_vars().
  void set_objective(std::vector<double> objective);
  void add_constraint(Constraint row);
  void add_constraint(std::vector<double> coeffs, Relation relation, double rhs) {
    add_constraint(Constraint{std::move(coeffs), relation, rhs});
  }

  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

 private:
  std::size_t num_vars_;
  std::vector<double> objective_;
  std::vector<Constraint> constraints_;
};

/// Value-semantic append: returns `program` with `row` added.
LinearProgram add_constraint(LinearProgram program, Constraint row);

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  std::size_t pivots = 0;
};

/// Two-phase dense tableau simplex with Bland's rule. Optimal solutions
/// satisfy every row within `tol`. Throws NumericalFailure when the pivot cap
/// is hit or the final point fails that check.
Solution solve(const LinearProgram& program, double tol = kFeasibilityTolerance);

/// Largest violation of any row (and of x >= 0) at `x`.
double max_violation(const LinearProgram& program, const std::vector<double>& x);

}  // namespace prefmine::lp
