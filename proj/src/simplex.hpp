#pragma once

// Bounded-variable two-phase primal simplex on a dense tableau. Internal to
// the lp module; solve_lp() is the public entry point.

#include <vector>

#include "clusterdesc/lp.hpp"

namespace clusterdesc::detail {

struct SimplexOptions {
  double bound_tol = 1e-9;    // feasibility tolerance on variable bounds
  double row_tol = 1e-7;      // feasibility tolerance on row activities
  double opt_tol = 1e-9;      // reduced-cost optimality tolerance
  double infeas_tol = 1e-7;   // phase-1 optimum above this means infeasible
  long iteration_factor = 50; // limit = factor * (rows + cols)
  int bland_after = 100;      // consecutive non-improving pivots before Bland
};

LpSolution solve_with_options(const LpModel& model, const SimplexOptions& options);

}  // namespace clusterdesc::detail
