#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clusterdesc/errors.hpp"

namespace clusterdesc::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarStatus : char { Basic, AtLower, AtUpper };

class Simplex {
 public:
  Simplex(const LpModel& model, const SimplexOptions& options)
      : model_(model), opt_(options) {}

  LpSolution run();

 private:
  void build();
  bool solve_phase(int phase);
  void refine_basic_values();
  double current_value(int v) const;
  void set_phase_costs(int phase);
  [[noreturn]] void stall(int phase) const;

  const LpModel& model_;
  SimplexOptions opt_;

  int structurals_ = 0;
  int live_rows_ = 0;  // rows kept after dropping empty ones
  std::vector<int> row_of_live_;

  // Columns: structural vars, one slack per live row, then artificials.
  int cols_ = 0;
  std::vector<double> lower_, upper_, cost_;
  std::vector<std::vector<double>> tab_;  // live_rows_ x cols_, starts as [A | I | +-I]
  std::vector<double> rhs_;
  std::vector<int> basis_;                // basic column per live row
  std::vector<double> beta_;              // value of basic variable per live row
  std::vector<VarStatus> status_;
  std::vector<double> dual_;              // reduced-cost row
  std::vector<int> slack_col_;            // slack column per live row (columns of B^-1)
  int first_artificial_ = 0;

  long pivots_ = 0;
  long iteration_limit_ = 0;
  int stale_pivots_ = 0;  // consecutive pivots without objective improvement
  bool bland_ = false;
  double objective_shiftless_ = 0.0;
  bool infeasible_empty_row_ = false;
  double empty_row_violation_ = 0.0;
};

void Simplex::build() {
  structurals_ = model_.variable_count();
  if (static_cast<int>(model_.lower.size()) != structurals_ ||
      static_cast<int>(model_.upper.size()) != structurals_) {
    throw ValidationError("lp model bounds do not match the variable count");
  }
  for (int v = 0; v < structurals_; ++v) {
    if (model_.lower[v] > model_.upper[v]) {
      throw ValidationError("lp variable " + std::to_string(v) + " has lower > upper bound");
    }
  }

  row_of_live_.clear();
  for (std::size_t r = 0; r < model_.rows.size(); ++r) {
    const LpRow& row = model_.rows[r];
    std::vector<char> seen(static_cast<std::size_t>(structurals_), 0);
    for (const auto& [v, c] : row.coeffs) {
      if (v < 0 || v >= structurals_) {
        throw ValidationError("lp row " + std::to_string(r) + " references variable " +
                              std::to_string(v) + " out of range");
      }
      if (seen[static_cast<std::size_t>(v)]) {
        throw ValidationError("lp row " + std::to_string(r) + " has duplicate entry for variable " +
                              std::to_string(v));
      }
      seen[static_cast<std::size_t>(v)] = 1;
    }
    if (row.coeffs.empty()) {
      // Empty row: constant sense rhs. Either vacuous or an immediate
      // infeasibility certificate.
      bool ok = (row.sense == RowSense::Ge && 0.0 >= row.rhs - opt_.row_tol) ||
                (row.sense == RowSense::Le && 0.0 <= row.rhs + opt_.row_tol) ||
                (row.sense == RowSense::Eq && std::abs(row.rhs) <= opt_.row_tol);
      if (!ok) {
        infeasible_empty_row_ = true;
        empty_row_violation_ = std::abs(row.rhs);
      }
      continue;
    }
    row_of_live_.push_back(static_cast<int>(r));
  }
  live_rows_ = static_cast<int>(row_of_live_.size());

  const int slack_base = structurals_;
  first_artificial_ = structurals_ + live_rows_;
  cols_ = first_artificial_;  // artificials appended below as needed

  lower_.assign(static_cast<std::size_t>(cols_), 0.0);
  upper_.assign(static_cast<std::size_t>(cols_), 0.0);
  std::copy(model_.lower.begin(), model_.lower.end(), lower_.begin());
  std::copy(model_.upper.begin(), model_.upper.end(), upper_.begin());

  tab_.assign(static_cast<std::size_t>(live_rows_), std::vector<double>());
  rhs_.assign(static_cast<std::size_t>(live_rows_), 0.0);
  basis_.assign(static_cast<std::size_t>(live_rows_), -1);
  beta_.assign(static_cast<std::size_t>(live_rows_), 0.0);
  slack_col_.assign(static_cast<std::size_t>(live_rows_), -1);
  status_.assign(static_cast<std::size_t>(cols_), VarStatus::AtLower);

  // Nonbasic structurals start at a finite bound.
  for (int v = 0; v < structurals_; ++v) {
    if (std::isfinite(lower_[v])) {
      status_[v] = VarStatus::AtLower;
    } else if (std::isfinite(upper_[v])) {
      status_[v] = VarStatus::AtUpper;
    } else {
      status_[v] = VarStatus::AtLower;  // free variable pinned at 0
      lower_[v] = 0.0;                  // will leave 0 unless it enters the basis
    }
  }

  struct Pending {
    int live_row;
    double residual;
  };
  std::vector<Pending> need_artificial;

  for (int lr = 0; lr < live_rows_; ++lr) {
    const LpRow& row = model_.rows[static_cast<std::size_t>(row_of_live_[lr])];
    const int slack = slack_base + lr;
    slack_col_[lr] = slack;
    switch (row.sense) {
      case RowSense::Le:
        lower_[slack] = 0.0;
        upper_[slack] = kInf;
        break;
      case RowSense::Ge:
        lower_[slack] = -kInf;
        upper_[slack] = 0.0;
        break;
      case RowSense::Eq:
        lower_[slack] = 0.0;
        upper_[slack] = 0.0;
        break;
    }
    rhs_[lr] = row.rhs;
    double activity = 0.0;
    for (const auto& [v, c] : row.coeffs) activity += c * current_value(v);
    const double residual = row.rhs - activity;  // desired slack value
    if (residual >= lower_[slack] - opt_.bound_tol && residual <= upper_[slack] + opt_.bound_tol) {
      basis_[lr] = slack;
      beta_[lr] = std::clamp(residual, lower_[slack], upper_[slack]);
      status_[slack] = VarStatus::Basic;
    } else {
      // Clamp the slack to its nearest bound and cover the rest with an
      // artificial variable.
      const double clamped = std::clamp(residual, lower_[slack], upper_[slack]);
      status_[slack] = (clamped == lower_[slack]) ? VarStatus::AtLower : VarStatus::AtUpper;
      need_artificial.push_back({lr, residual - clamped});
    }
  }

  const int artificial_count = static_cast<int>(need_artificial.size());
  cols_ += artificial_count;
  lower_.resize(static_cast<std::size_t>(cols_), 0.0);
  upper_.resize(static_cast<std::size_t>(cols_), kInf);
  status_.resize(static_cast<std::size_t>(cols_), VarStatus::AtLower);

  for (int lr = 0; lr < live_rows_; ++lr) {
    tab_[lr].assign(static_cast<std::size_t>(cols_), 0.0);
    const LpRow& row = model_.rows[static_cast<std::size_t>(row_of_live_[lr])];
    for (const auto& [v, c] : row.coeffs) tab_[lr][static_cast<std::size_t>(v)] = c;
    tab_[lr][static_cast<std::size_t>(slack_col_[lr])] = 1.0;
  }
  for (int a = 0; a < artificial_count; ++a) {
    const auto& pending = need_artificial[static_cast<std::size_t>(a)];
    const int col = first_artificial_ + a;
    const double sign = pending.residual >= 0.0 ? 1.0 : -1.0;
    tab_[pending.live_row][static_cast<std::size_t>(col)] = sign;
    basis_[pending.live_row] = col;
    beta_[pending.live_row] = std::abs(pending.residual);
    status_[col] = VarStatus::Basic;
  }

  cost_.assign(static_cast<std::size_t>(cols_), 0.0);
  iteration_limit_ =
      opt_.iteration_factor * static_cast<long>(model_.rows.size() + model_.vars.size());
}

double Simplex::current_value(int v) const {
  switch (status_[static_cast<std::size_t>(v)]) {
    case VarStatus::AtLower:
      return lower_[static_cast<std::size_t>(v)];
    case VarStatus::AtUpper:
      return upper_[static_cast<std::size_t>(v)];
    case VarStatus::Basic:
      for (int lr = 0; lr < live_rows_; ++lr) {
        if (basis_[static_cast<std::size_t>(lr)] == v) return beta_[static_cast<std::size_t>(lr)];
      }
      return 0.0;
  }
  return 0.0;
}

void Simplex::set_phase_costs(int phase) {
  std::fill(cost_.begin(), cost_.end(), 0.0);
  if (phase == 1) {
    for (int c = first_artificial_; c < cols_; ++c) cost_[static_cast<std::size_t>(c)] = 1.0;
  } else {
    const double flip = model_.sense == ObjectiveSense::Maximize ? -1.0 : 1.0;
    for (const auto& [v, c] : model_.objective) cost_[static_cast<std::size_t>(v)] += flip * c;
  }
  // Reduced costs from scratch: d_j = c_j - c_B' * (B^-1 A)_j.
  dual_ = cost_;
  for (int lr = 0; lr < live_rows_; ++lr) {
    const double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(lr)])];
    if (cb == 0.0) continue;
    for (int j = 0; j < cols_; ++j) {
      dual_[static_cast<std::size_t>(j)] -= cb * tab_[static_cast<std::size_t>(lr)][static_cast<std::size_t>(j)];
    }
  }
  stale_pivots_ = 0;
  bland_ = false;
}

void Simplex::refine_basic_values() {
  // Slack columns of the tableau hold B^-1; recompute basic values from the
  // original data to shed accumulated pivot error.
  std::vector<double> residual(static_cast<std::size_t>(live_rows_), 0.0);
  for (int lr = 0; lr < live_rows_; ++lr) {
    const LpRow& row = model_.rows[static_cast<std::size_t>(row_of_live_[lr])];
    double acc = row.rhs;
    for (const auto& [v, c] : row.coeffs) {
      if (status_[static_cast<std::size_t>(v)] != VarStatus::Basic) acc -= c * current_value(v);
    }
    // Nonbasic slack of this row.
    if (status_[static_cast<std::size_t>(slack_col_[lr])] != VarStatus::Basic) {
      acc -= current_value(slack_col_[lr]);
    }
    // Nonbasic artificials sit at 0 and contribute nothing.
    residual[static_cast<std::size_t>(lr)] = acc;
  }
  for (int lr = 0; lr < live_rows_; ++lr) {
    double value = 0.0;
    for (int r2 = 0; r2 < live_rows_; ++r2) {
      value += tab_[static_cast<std::size_t>(lr)][static_cast<std::size_t>(slack_col_[r2])] *
               residual[static_cast<std::size_t>(r2)];
    }
    beta_[static_cast<std::size_t>(lr)] = value;
  }
}

void Simplex::stall(int phase) const {
  std::string msg = "simplex iteration limit (" + std::to_string(iteration_limit_) +
                    ") exceeded in phase " + std::to_string(phase) + "; pivots=" +
                    std::to_string(pivots_) + " rows=" + std::to_string(live_rows_) +
                    " cols=" + std::to_string(cols_) + " bland=" + (bland_ ? "on" : "off");
  throw SolverStallError(msg);
}

bool Simplex::solve_phase(int phase) {
  set_phase_costs(phase);
  while (true) {
    if (pivots_ >= iteration_limit_) stall(phase);

    // Entering variable: most violated reduced cost (Dantzig), lowest index
    // under Bland's rule. Fixed variables never enter.
    int entering = -1;
    double best_violation = 0.0;
    int direction = 0;
    for (int j = 0; j < cols_; ++j) {
      if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
      if (upper_[static_cast<std::size_t>(j)] - lower_[static_cast<std::size_t>(j)] <
          opt_.bound_tol) {
        continue;
      }
      const double d = dual_[static_cast<std::size_t>(j)];
      double violation = 0.0;
      int dir = 0;
      if (status_[static_cast<std::size_t>(j)] == VarStatus::AtLower && d < -opt_.opt_tol) {
        violation = -d;
        dir = +1;
      } else if (status_[static_cast<std::size_t>(j)] == VarStatus::AtUpper && d > opt_.opt_tol) {
        violation = d;
        dir = -1;
      } else {
        continue;
      }
      if (bland_) {
        entering = j;
        direction = dir;
        best_violation = violation;
        break;
      }
      if (violation > best_violation + 1e-15) {
        best_violation = violation;
        entering = j;
        direction = dir;
      }
    }
    if (entering < 0) return true;  // phase optimum

    // Ratio test: step length before some basic variable (or the entering
    // variable's own opposite bound) becomes binding.
    const double span =
        upper_[static_cast<std::size_t>(entering)] - lower_[static_cast<std::size_t>(entering)];
    double step = std::isfinite(span) ? span : kInf;
    int leaving_row = -1;   // -1 with finite step means bound flip
    bool leaving_to_upper = false;
    for (int lr = 0; lr < live_rows_; ++lr) {
      const double alpha = tab_[static_cast<std::size_t>(lr)][static_cast<std::size_t>(entering)];
      const double rate = -direction * alpha;  // d(beta_lr)/dt
      if (std::abs(rate) <= 1e-11) continue;
      const int bv = basis_[static_cast<std::size_t>(lr)];
      double limit;
      bool to_upper;
      if (rate > 0.0) {
        limit = (upper_[static_cast<std::size_t>(bv)] - beta_[static_cast<std::size_t>(lr)]) / rate;
        to_upper = true;
      } else {
        limit = (beta_[static_cast<std::size_t>(lr)] - lower_[static_cast<std::size_t>(bv)]) / (-rate);
        to_upper = false;
      }
      if (!std::isfinite(limit)) continue;
      limit = std::max(limit, 0.0);
      if (limit < step - 1e-12) {
        step = limit;
        leaving_row = lr;
        leaving_to_upper = to_upper;
      } else if (leaving_row >= 0 && limit <= step + 1e-12 &&
                 basis_[static_cast<std::size_t>(lr)] <
                     basis_[static_cast<std::size_t>(leaving_row)]) {
        // Tie: prefer the lowest basic variable index.
        step = std::min(step, limit);
        leaving_row = lr;
        leaving_to_upper = to_upper;
      }
    }

    if (!std::isfinite(step)) return false;  // unbounded in this direction

    const double improvement = best_violation * step;
    ++pivots_;
    if (improvement <= 1e-12) {
      if (++stale_pivots_ >= opt_.bland_after) bland_ = true;
    } else {
      stale_pivots_ = 0;
    }

    if (leaving_row < 0) {
      // Bound flip: no basis change.
      for (int lr = 0; lr < live_rows_; ++lr) {
        const double alpha = tab_[static_cast<std::size_t>(lr)][static_cast<std::size_t>(entering)];
        beta_[static_cast<std::size_t>(lr)] += -direction * alpha * step;
      }
      status_[static_cast<std::size_t>(entering)] =
          direction > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      continue;
    }

    const int leaving = basis_[static_cast<std::size_t>(leaving_row)];
    const double entering_start =
        status_[static_cast<std::size_t>(entering)] == VarStatus::AtLower
            ? lower_[static_cast<std::size_t>(entering)]
            : upper_[static_cast<std::size_t>(entering)];
    for (int lr = 0; lr < live_rows_; ++lr) {
      if (lr == leaving_row) continue;
      const double alpha = tab_[static_cast<std::size_t>(lr)][static_cast<std::size_t>(entering)];
      beta_[static_cast<std::size_t>(lr)] += -direction * alpha * step;
    }

    // Row reduction on the pivot element.
    auto& pivot_row = tab_[static_cast<std::size_t>(leaving_row)];
    const double pivot = pivot_row[static_cast<std::size_t>(entering)];
    const double inv = 1.0 / pivot;
    for (double& t : pivot_row) t *= inv;
    pivot_row[static_cast<std::size_t>(entering)] = 1.0;
    for (int lr = 0; lr < live_rows_; ++lr) {
      if (lr == leaving_row) continue;
      auto& row = tab_[static_cast<std::size_t>(lr)];
      const double factor = row[static_cast<std::size_t>(entering)];
      if (factor == 0.0) continue;
      for (int j = 0; j < cols_; ++j) {
        row[static_cast<std::size_t>(j)] -= factor * pivot_row[static_cast<std::size_t>(j)];
      }
      row[static_cast<std::size_t>(entering)] = 0.0;
    }
    const double dual_factor = dual_[static_cast<std::size_t>(entering)];
    if (dual_factor != 0.0) {
      for (int j = 0; j < cols_; ++j) {
        dual_[static_cast<std::size_t>(j)] -= dual_factor * pivot_row[static_cast<std::size_t>(j)];
      }
      dual_[static_cast<std::size_t>(entering)] = 0.0;
    }

    basis_[static_cast<std::size_t>(leaving_row)] = entering;
    beta_[static_cast<std::size_t>(leaving_row)] = entering_start + direction * step;
    status_[static_cast<std::size_t>(entering)] = VarStatus::Basic;
    status_[static_cast<std::size_t>(leaving)] =
        leaving_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    // A leaving variable with an infinite bound on the binding side cannot
    // happen: the ratio test only picks finite limits.
  }
}

LpSolution Simplex::run() {
  build();
  LpSolution out;
  if (infeasible_empty_row_) {
    out.status = LpStatus::Infeasible;
    out.phase1_infeasibility = empty_row_violation_;
    return out;
  }

  if (cols_ > first_artificial_) {
    if (!solve_phase(1)) {
      // Phase 1 is bounded below by 0; unbounded cannot happen.
      throw NumericalError("phase-1 simplex reported an unbounded direction");
    }
    refine_basic_values();
    double infeasibility = 0.0;
    for (int lr = 0; lr < live_rows_; ++lr) {
      if (basis_[static_cast<std::size_t>(lr)] >= first_artificial_) {
        infeasibility += std::max(0.0, beta_[static_cast<std::size_t>(lr)]);
      }
    }
    if (infeasibility > opt_.infeas_tol) {
      out.status = LpStatus::Infeasible;
      out.phase1_infeasibility = infeasibility;
      out.pivots = pivots_;
      return out;
    }
    // Pin artificials at zero for phase 2.
    for (int c = first_artificial_; c < cols_; ++c) {
      upper_[static_cast<std::size_t>(c)] = 0.0;
      if (status_[static_cast<std::size_t>(c)] == VarStatus::AtUpper) {
        status_[static_cast<std::size_t>(c)] = VarStatus::AtLower;
      }
    }
  }

  if (!solve_phase(2)) {
    out.status = LpStatus::Unbounded;
    out.pivots = pivots_;
    return out;
  }
  refine_basic_values();

  out.status = LpStatus::Optimal;
  out.pivots = pivots_;
  out.values.assign(static_cast<std::size_t>(structurals_), 0.0);
  for (int v = 0; v < structurals_; ++v) {
    double value = current_value(v);
    value = std::clamp(value, lower_[static_cast<std::size_t>(v)] - opt_.bound_tol,
                       upper_[static_cast<std::size_t>(v)] + opt_.bound_tol);
    out.values[static_cast<std::size_t>(v)] = value;
  }
  double objective = 0.0;
  for (const auto& [v, c] : model_.objective) objective += c * out.values[static_cast<std::size_t>(v)];
  out.objective = objective;

  out.row_activity.assign(model_.rows.size(), 0.0);
  for (std::size_t r = 0; r < model_.rows.size(); ++r) {
    double activity = 0.0;
    for (const auto& [v, c] : model_.rows[r].coeffs) {
      activity += c * out.values[static_cast<std::size_t>(v)];
    }
    out.row_activity[r] = activity;
    const LpRow& row = model_.rows[r];
    const bool ok = (row.sense == RowSense::Ge && activity >= row.rhs - opt_.row_tol) ||
                    (row.sense == RowSense::Le && activity <= row.rhs + opt_.row_tol) ||
                    (row.sense == RowSense::Eq && std::abs(activity - row.rhs) <= opt_.row_tol);
    if (!ok) {
      throw NumericalError("simplex returned a row violation of " +
                           std::to_string(std::abs(activity - row.rhs)) + " on row " +
                           std::to_string(r));
    }
  }
  out.reduced_costs.assign(static_cast<std::size_t>(structurals_), 0.0);
  for (int v = 0; v < structurals_; ++v) {
    out.reduced_costs[static_cast<std::size_t>(v)] = dual_[static_cast<std::size_t>(v)];
  }
  return out;
}

}  // namespace

LpSolution solve_with_options(const LpModel& model, const SimplexOptions& options) {
  Simplex simplex(model, options);
  return simplex.run();
}

}  // namespace clusterdesc::detail
