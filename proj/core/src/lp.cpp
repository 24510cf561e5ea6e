#include "prefmine/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prefmine/error.hpp"

namespace prefmine::lp {

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kReducedCostTolerance = 1e-10;
constexpr double kZeroClean = 1e-13;

enum class Sense { LessEqual, GreaterEqual, Equal };

// Dense tableau. Row `m` holds reduced costs; its last entry is -objective.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
      if (r < rows_ && std::abs(row[cols_]) < kZeroClean) row[cols_] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Bland's rule simplex on the current cost row. Columns >= `allowed` never
  // enter. Returns false when unbounded.
  bool optimize(std::size_t allowed, std::size_t& pivots, std::size_t cap) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (cost(c) < -kReducedCostTolerance) {
          enter = c;
          break;
        }
      }
      if (enter == cols_) return true;

      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTolerance) continue;
        const double ratio = std::max(rhs(r), 0.0) / a;
        if (leave == rows_) {
          best = ratio;
          leave = r;
          continue;
        }
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (ratio < best - slack) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + slack && basis_[r] < basis_[leave]) {
          leave = r;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
      if (++pivots > cap) {
        throw NumericalFailure("simplex pivot cap (" + std::to_string(cap) + ") exceeded");
      }
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LinearProgram::LinearProgram(std::size_t num_vars)
    : num_vars_(num_vars), objective_(num_vars, 0.0) {
  if (num_vars == 0) throw DimensionMismatch("a linear program needs at least one variable");
}

void LinearProgram::set_objective(std::vector<double> objective) {
  if (objective.size() != num_vars_) throw DimensionMismatch("objective length differs from num_vars");
  objective_ = std::move(objective);
}

void LinearProgram::add_constraint(Constraint row) {
  if (row.coeffs.size() != num_vars_) {
    throw DimensionMismatch("constraint has " + std::to_string(row.coeffs.size()) +
                            " coefficients, program has " + std::to_string(num_vars_) +
                            " variables");
  }
  for (const double a : row.coeffs) {
    if (!std::isfinite(a)) throw DimensionMismatch("non-finite constraint coefficient");
  }
  if (!std::isfinite(row.rhs)) throw DimensionMismatch("non-finite right-hand side");
  constraints_.push_back(std::move(row));
}

LinearProgram add_constraint(LinearProgram program, Constraint row) {
  program.add_constraint(std::move(row));
  return program;
}

double max_violation(const LinearProgram& program, const std::vector<double>& x) {
  double worst = 0.0;
  for (const double v : x) worst = std::max(worst, -v);
  for (const auto& row : program.constraints()) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    const double gap = lhs - row.rhs;
    worst = std::max(worst, row.relation == Relation::Equal ? std::abs(gap) : gap);
  }
  return worst;
}

Solution solve(const LinearProgram& program, double tol) {
  const std::size_t n = program.num_vars();
  const auto& rows = program.constraints();
  const std::size_t m = rows.size();

  std::vector<Sense> sense(m);
  std::vector<double> sign(m, 1.0);
  std::size_t num_slack = 0;
  std::size_t num_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    Sense s = rows[i].relation == Relation::Equal ? Sense::Equal : Sense::LessEqual;
    if (rows[i].rhs < 0.0) {
      sign[i] = -1.0;
      if (s == Sense::LessEqual) s = Sense::GreaterEqual;
    }
    sense[i] = s;
    if (s != Sense::Equal) ++num_slack;
    if (s != Sense::LessEqual) ++num_art;
  }

  const std::size_t art_begin = n + num_slack;
  Tableau tab(m, art_begin + num_art);
  std::size_t slack_col = n;
  std::size_t art_col = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign[i] * rows[i].coeffs[j];
    tab.rhs(i) = sign[i] * rows[i].rhs;
    switch (sense[i]) {
      case Sense::LessEqual:
        tab.at(i, slack_col) = 1.0;
        tab.basis()[i] = slack_col++;
        break;
      case Sense::GreaterEqual:
        tab.at(i, slack_col++) = -1.0;
        tab.at(i, art_col) = 1.0;
        tab.basis()[i] = art_col++;
        break;
      case Sense::Equal:
        tab.at(i, art_col) = 1.0;
        tab.basis()[i] = art_col++;
        break;
    }
  }

  Solution sol;
  const std::size_t cap = 50000 + 200 * (m + n);

  // Phase 1: minimize the sum of artificials.
  if (num_art > 0) {
    for (std::size_t c = art_begin; c < tab.cols(); ++c) tab.cost(c) = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] < art_begin) continue;
      for (std::size_t c = 0; c <= tab.cols(); ++c) tab.at(m, c) -= tab.at(r, c);
    }
    tab.optimize(tab.cols(), sol.pivots, cap);
    const double infeasibility = -tab.at(m, tab.cols());
    if (infeasibility > tol) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] < art_begin) continue;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::abs(tab.at(r, c)) > kPivotTolerance) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  // Phase 2: original objective over structural and slack columns.
  for (std::size_t c = 0; c <= tab.cols(); ++c) tab.cost(c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) tab.cost(j) = program.objective()[j];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = tab.basis()[r];
    const double cb = b < n ? program.objective()[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= tab.cols(); ++c) tab.at(m, c) -= cb * tab.at(r, c);
  }
  if (!tab.optimize(art_begin, sol.pivots, cap)) {
    sol.status = Status::Unbounded;
    return sol;
  }

  sol.values.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) sol.values[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);
  }
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += program.objective()[j] * sol.values[j];

  const double violation = max_violation(program, sol.values);
  if (violation > tol) {
    throw NumericalFailure("simplex solution violates a constraint by " + std::to_string(violation));
  }
  sol.status = Status::Optimal;
  return sol;
}

}  // namespace prefmine::lp
