#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clusterdesc/instance.hpp"

namespace clusterdesc {

enum class VarKind : std::uint8_t {
  TagAssign,      // x_l(j): tag j assigned to cluster l
  ObjectCovered,  // z(i): object i counted as covered
  OverlapFlag,    // y(j): tag j allowed in both descriptors (k = 2 variant)
};

struct VarDesc {
  VarKind kind = VarKind::TagAssign;
  int cluster = -1;  // only for TagAssign
  int index = 0;     // tag id or object id
};

enum class RowSense : std::uint8_t { Ge, Le, Eq };

struct LpRow {
  RowSense sense = RowSense::Ge;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient), unique vars
};

enum class ObjectiveSense : std::uint8_t { Minimize, Maximize };

// Sparse LP over [0,1] variables. Variable and row ordering is deterministic:
// x variables cluster-major, then z by object index, then y by tag index.
struct LpModel {
  ObjectiveSense sense = ObjectiveSense::Minimize;
  std::vector<VarDesc> vars;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::pair<int, double>> objective;
  std::vector<LpRow> rows;

  // Shape echoed from the instance for index arithmetic.
  int clusters = 0;
  int tags = 0;
  int objects = 0;
  bool has_overlap_vars = false;

  int x_index(int cluster, TagId j) const { return cluster * tags + j; }
  int z_index(int object) const { return clusters * tags + object; }
  int y_index(TagId j) const { return clusters * tags + objects + j; }
  int variable_count() const { return static_cast<int>(vars.size()); }

  // Deterministic names: x_<l>_<j>, z_<i>, y_<j>.
  std::string variable_name(int v) const;
};

enum class LpStatus : std::uint8_t { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;        // per variable
  std::vector<double> row_activity;  // per row, recomputed from values
  double phase1_infeasibility = 0.0; // certificate value when infeasible
  long pivots = 0;
  // Reduced costs in minimization sense; used by the optimality-condition
  // checks in the test suite.
  std::vector<double> reduced_costs;
};

// LP relaxation of the min-cost disjoint-descriptor ILP.
LpModel build_relaxation(const Instance& instance, const Requirements& requirements);

// Coverage-maximizing LP with cost budget and bounded overlap (k = 2 only).
LpModel build_overlap_lp(const Instance& instance, const Requirements& requirements);

// Two-phase bounded-variable primal simplex. Deterministic for a fixed model.
LpSolution solve_lp(const LpModel& model);

// CPLEX LP text format, for handing the model to an external solver.
std::string write_lp_text(const LpModel& model);

}  // namespace clusterdesc
