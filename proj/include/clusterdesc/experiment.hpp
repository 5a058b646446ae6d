#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clusterdesc/instance.hpp"
#include "clusterdesc/io.hpp"

namespace clusterdesc {

// Outcome of one solve, as emitted by the CLI. Coverage figures are always
// recomputed from (instance, solution), never copied from solver internals.
struct RunReport {
  std::string method;
  std::string fingerprint;  // instance content hash, 16 hex digits
  std::vector<int> coverage_targets;
  std::optional<int> budget;
  std::optional<int> overlap_budget;
  std::string outcome;  // "solution", "failure", "infeasible",
                        // "no feasible solution", "budget-exhausted"
  std::optional<Solution> solution;
  int cost = 0;
  std::vector<int> covered;
  std::vector<int> cluster_sizes;
  int overlap = 0;
  std::uint64_t seed = 0;
  std::optional<double> wall_ms;  // filled only when timings are requested
  std::map<std::string, double> diagnostics;
};

std::string report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);  // header + one row

// Builds the solution-dependent fields of a report from scratch.
void finalize_report(RunReport& report, const Instance& instance);

struct SweepOptions {
  std::vector<int> budgets;
  std::vector<double> fractions;
  std::vector<std::uint64_t> seeds = {0};
  std::optional<std::vector<int>> coverage;  // explicit targets override
  double coverage_fraction = 0.7;
  int rounds = 10;  // the harness default for the rounding retry loop
  int jobs = 1;
  long long node_limit = 1'000'000;
};

// Per-cluster coverage targets: explicit override or ceil(f * |C_l|).
std::vector<int> targets_from_fraction(const Instance& instance, double fraction);

// Figure-1 style sweep: exact cover-or-forget per budget, one CSV row per
// (budget, cluster). Columns:
//   budget,cluster,covered,cluster_size,coverage_pct,method,seed
std::string sweep_coverage_vs_cost(const InstanceDocument& document, const SweepOptions& options);

// Figure-2 style sweep: minimum ILP cost per coverage fraction. Columns:
//   coverage_frac,min_cost,feasible,method
std::string sweep_cost_vs_coverage(const InstanceDocument& document, const SweepOptions& options);

// Figure-3 style sweep: the joint rounding of the budgeted coverage LP
// (overlap budget 0) against the exact cover-or-forget optimum. Columns:
//   budget,ratio,round_coverage_total,opt_coverage_total,seed
struct ApproxRatioPoint {
  int budget = 0;
  std::uint64_t seed = 0;
  bool lp_feasible = false;
  bool accepted = false;
  bool opt_proven = true;
  long long round_coverage_total = 0;
  long long opt_coverage_total = 0;
  double ratio = 0.0;
};
std::vector<ApproxRatioPoint> run_approx_ratio(const Instance& instance,
                                               const std::vector<int>& targets,
                                               const SweepOptions& options);
std::string sweep_approx_ratio(const InstanceDocument& document, const SweepOptions& options);

// Default --jobs value: the CLUSTER_DESCRIBE_JOBS environment variable, or 1.
int default_jobs();

std::string fingerprint_hex(const InstanceDocument& document);

}  // namespace clusterdesc
