#include "clusterdesc/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "clusterdesc/exact.hpp"
#include "clusterdesc/lp.hpp"
#include "clusterdesc/rng.hpp"
#include "clusterdesc/rounding.hpp"

namespace clusterdesc {

namespace {

using nlohmann::json;

std::string join_ints(const std::vector<int>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::string format_pct(double value) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << value;
  return out.str();
}

// Runs fn(0..count-1) on up to `jobs` threads; results land in index order.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace

int default_jobs() {
  if (const char* env = std::getenv("CLUSTER_DESCRIBE_JOBS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  return 1;
}

std::string fingerprint_hex(const InstanceDocument& document) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << instance_fingerprint(document);
  return out.str();
}

std::vector<int> targets_from_fraction(const Instance& instance, double fraction) {
  std::vector<int> targets(static_cast<std::size_t>(instance.cluster_count()), 0);
  for (int l = 0; l < instance.cluster_count(); ++l) {
    targets[static_cast<std::size_t>(l)] = static_cast<int>(
        std::ceil(fraction * instance.cluster_sizes()[static_cast<std::size_t>(l)]));
  }
  return targets;
}

void finalize_report(RunReport& report, const Instance& instance) {
  report.cluster_sizes = instance.cluster_sizes();
  if (!report.solution) {
    report.cost = 0;
    report.overlap = 0;
    report.covered.assign(static_cast<std::size_t>(instance.cluster_count()), 0);
    return;
  }
  Requirements requirements;
  requirements.coverage = report.coverage_targets;
  const FeasibilityReport feasibility =
      validate_solution(instance, requirements, *report.solution);
  report.cost = feasibility.cost;
  report.overlap = feasibility.overlap;
  report.covered = feasibility.covered;
}

std::string report_to_json(const RunReport& report) {
  json doc;
  doc["method"] = report.method;
  doc["instance_fingerprint"] = report.fingerprint;
  doc["coverage_targets"] = report.coverage_targets;
  if (report.budget) doc["budget"] = *report.budget;
  if (report.overlap_budget) doc["overlap_budget"] = *report.overlap_budget;
  doc["outcome"] = report.outcome;
  if (report.solution) {
    json descriptors = json::array();
    for (const auto& descriptor : report.solution->descriptors) descriptors.push_back(descriptor);
    doc["descriptors"] = std::move(descriptors);
  }
  doc["cost"] = report.cost;
  doc["covered"] = report.covered;
  doc["cluster_sizes"] = report.cluster_sizes;
  json pct = json::array();
  for (std::size_t l = 0; l < report.covered.size(); ++l) {
    const int size = report.cluster_sizes[l];
    pct.push_back(size > 0 ? 100.0 * report.covered[l] / size : 0.0);
  }
  doc["coverage_pct"] = std::move(pct);
  doc["overlap"] = report.overlap;
  doc["seed"] = report.seed;
  if (report.wall_ms) doc["wall_ms"] = *report.wall_ms;
  if (!report.diagnostics.empty()) doc["diagnostics"] = report.diagnostics;
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "method,outcome,cost,overlap,covered,cluster_sizes,coverage_pct,seed,fingerprint\n";
  out << report.method << ',' << report.outcome << ',' << report.cost << ',' << report.overlap
      << ',' << join_ints(report.covered, ';') << ',' << join_ints(report.cluster_sizes, ';')
      << ',';
  for (std::size_t l = 0; l < report.covered.size(); ++l) {
    if (l) out << ';';
    const int size = report.cluster_sizes[l];
    out << format_pct(size > 0 ? 100.0 * report.covered[l] / size : 0.0);
  }
  out << ',' << report.seed << ',' << report.fingerprint << "\n";
  return out.str();
}

std::string sweep_coverage_vs_cost(const InstanceDocument& document, const SweepOptions& options) {
  const Instance& instance = document.instance;
  struct Point {
    std::vector<int> covered;
    bool exhausted = false;
  };
  const int count = static_cast<int>(options.budgets.size() * options.seeds.size());
  std::vector<Point> points(static_cast<std::size_t>(count));
  parallel_for(count, options.jobs, [&](int index) {
    const int budget =
        options.budgets[static_cast<std::size_t>(index) / options.seeds.size()];
    const ExactResult result = cover_or_forget(instance, budget, options.node_limit);
    Point& point = points[static_cast<std::size_t>(index)];
    point.exhausted = result.status == ExactStatus::BudgetExhausted;
    point.covered = result.solution ? coverage(instance, *result.solution)
                                    : std::vector<int>(
                                          static_cast<std::size_t>(instance.cluster_count()), 0);
  });

  std::ostringstream out;
  out << "budget,cluster,covered,cluster_size,coverage_pct,method,seed\n";
  int index = 0;
  for (const int budget : options.budgets) {
    for (const std::uint64_t seed : options.seeds) {
      const Point& point = points[static_cast<std::size_t>(index++)];
      for (int l = 0; l < instance.cluster_count(); ++l) {
        const int size = instance.cluster_sizes()[static_cast<std::size_t>(l)];
        out << budget << ',' << l << ',' << point.covered[static_cast<std::size_t>(l)] << ','
            << size << ','
            << format_pct(size > 0 ? 100.0 * point.covered[static_cast<std::size_t>(l)] / size
                                   : 0.0)
            << ",cover-or-forget" << (point.exhausted ? "!budget-exhausted" : "") << ',' << seed
            << "\n";
      }
    }
  }
  return out.str();
}

std::string sweep_cost_vs_coverage(const InstanceDocument& document, const SweepOptions& options) {
  const Instance& instance = document.instance;
  struct Point {
    bool feasible = false;
    bool exhausted = false;
    long long min_cost = 0;
  };
  const int count = static_cast<int>(options.fractions.size());
  std::vector<Point> points(static_cast<std::size_t>(count));
  parallel_for(count, options.jobs, [&](int index) {
    Requirements requirements;
    requirements.coverage =
        targets_from_fraction(instance, options.fractions[static_cast<std::size_t>(index)]);
    Point& point = points[static_cast<std::size_t>(index)];
    try {
      const ExactResult result = branch_and_bound(instance, requirements, options.node_limit);
      point.exhausted = result.status == ExactStatus::BudgetExhausted;
      point.feasible = result.status == ExactStatus::Optimal;
      if (result.solution) point.min_cost = result.objective;
    } catch (const ValidationError&) {
      // Targets above the coverable counts cannot be met.
      point.feasible = false;
    }
  });

  std::ostringstream out;
  out << "coverage_frac,min_cost,feasible,method\n";
  for (int index = 0; index < count; ++index) {
    const Point& point = points[static_cast<std::size_t>(index)];
    out << options.fractions[static_cast<std::size_t>(index)] << ',';
    if (point.feasible) out << point.min_cost;
    out << ',' << (point.feasible ? "true" : "false") << ",ilp"
        << (point.exhausted ? "!budget-exhausted" : "") << "\n";
  }
  return out.str();
}

std::vector<ApproxRatioPoint> run_approx_ratio(const Instance& instance,
                                               const std::vector<int>& targets,
                                               const SweepOptions& options) {
  const int count = static_cast<int>(options.budgets.size() * options.seeds.size());
  std::vector<ApproxRatioPoint> points(static_cast<std::size_t>(count));
  parallel_for(count, options.jobs, [&](int index) {
    ApproxRatioPoint& point = points[static_cast<std::size_t>(index)];
    point.budget = options.budgets[static_cast<std::size_t>(index) / options.seeds.size()];
    point.seed = options.seeds[static_cast<std::size_t>(index) % options.seeds.size()];

    Requirements requirements;
    requirements.coverage = targets;
    requirements.budget = point.budget;
    requirements.overlap_budget = 0;
    const LpModel model = build_overlap_lp(instance, requirements);
    const LpSolution lp = solve_lp(model);
    if (lp.status != LpStatus::Optimal) return;  // infeasible grid point
    point.lp_feasible = true;

    RoundingConfig config;
    config.rounds = options.rounds;
    config.seed = derive_stream(point.seed, static_cast<std::uint64_t>(point.budget));
    const RoundingOutcome outcome = round_overlap(model, lp, instance, requirements, config);
    if (outcome.status != RoundingStatus::Accepted) return;
    point.accepted = true;
    for (const int c : coverage(instance, *outcome.solution)) point.round_coverage_total += c;

    const ExactResult opt = cover_or_forget(instance, point.budget, options.node_limit);
    point.opt_proven = opt.status == ExactStatus::Optimal;
    point.opt_coverage_total = opt.objective;
    point.ratio = point.opt_coverage_total > 0
                      ? static_cast<double>(point.round_coverage_total) /
                            static_cast<double>(point.opt_coverage_total)
                      : 1.0;
  });
  return points;
}

std::string sweep_approx_ratio(const InstanceDocument& document, const SweepOptions& options) {
  const Instance& instance = document.instance;
  const std::vector<int> targets =
      options.coverage ? *options.coverage
                       : targets_from_fraction(instance, options.coverage_fraction);
  const std::vector<ApproxRatioPoint> points = run_approx_ratio(instance, targets, options);

  std::ostringstream out;
  out << "budget,ratio,round_coverage_total,opt_coverage_total,seed\n";
  for (const ApproxRatioPoint& point : points) {
    if (!point.lp_feasible) continue;  // infeasible budgets produce no row
    out << point.budget << ',';
    if (!point.accepted) {
      out << "failure,,";
    } else if (!point.opt_proven) {
      out << "budget-exhausted," << point.round_coverage_total << ',' << point.opt_coverage_total;
    } else {
      out << point.ratio << ',' << point.round_coverage_total << ',' << point.opt_coverage_total;
    }
    out << ',' << point.seed << "\n";
  }
  return out.str();
}

}  // namespace clusterdesc
