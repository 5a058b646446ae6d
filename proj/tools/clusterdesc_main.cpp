// Command-line surface for the cluster-descriptor solvers: solve with any
// method, generate synthetic data, print instance statistics, transform
// instances, and run the experiment sweeps.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "clusterdesc/dp.hpp"
#include "clusterdesc/exact.hpp"
#include "clusterdesc/experiment.hpp"
#include "clusterdesc/io.hpp"
#include "clusterdesc/lp.hpp"
#include "clusterdesc/rng.hpp"
#include "clusterdesc/rounding.hpp"
#include "clusterdesc/submodular.hpp"

namespace {

using namespace clusterdesc;

constexpr int kExitSolved = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoSolution = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
  if (!path) {
    std::cout << content;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + *path + "'");
  out << content;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": '" + item + "' is not an integer");
    }
  }
  if (values.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return values;
}

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (values.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return values;
}

struct SolveArgs {
  std::string instance_path;
  std::string method;
  std::string coverage_list;
  double coverage_frac = -1.0;
  int budget = -1;
  int overlap_budget = -1;
  std::uint64_t seed = 0;
  int rounds = 0;
  double epsilon = 0.1;
  std::optional<std::string> out;
  std::optional<std::string> solution_out;
  std::string format = "json";
  bool timings = false;
};

int run_solve(const SolveArgs& args) {
  const InstanceDocument document = parse_instance(read_file(args.instance_path));
  const Instance& instance = document.instance;

  Requirements requirements;
  if (!args.coverage_list.empty()) {
    requirements.coverage = parse_int_list(args.coverage_list, "--coverage");
    if (static_cast<int>(requirements.coverage.size()) != instance.cluster_count()) {
      throw ValidationError("--coverage needs exactly k=" +
                            std::to_string(instance.cluster_count()) + " values");
    }
  } else if (args.coverage_frac >= 0.0) {
    requirements.coverage = targets_from_fraction(instance, args.coverage_frac);
  } else {
    throw ValidationError("--method " + args.method +
                          " needs --coverage or --coverage-frac");
  }
  if (args.budget >= 0) requirements.budget = args.budget;
  if (args.overlap_budget >= 0) requirements.overlap_budget = args.overlap_budget;

  RunReport report;
  report.method = args.method;
  report.fingerprint = fingerprint_hex(document);
  report.coverage_targets = requirements.coverage;
  report.budget = requirements.budget;
  report.overlap_budget = requirements.overlap_budget;
  report.seed = args.seed;

  RoundingConfig rounding_config;
  rounding_config.seed = args.seed;
  rounding_config.rounds = args.rounds;
  rounding_config.epsilon = args.epsilon;

  const auto start = std::chrono::steady_clock::now();
  if (args.method == "ilp") {
    const ExactResult result = branch_and_bound(instance, requirements);
    report.diagnostics["nodes"] = static_cast<double>(result.nodes);
    switch (result.status) {
      case ExactStatus::Optimal:
        report.outcome = "solution";
        report.solution = result.solution;
        break;
      case ExactStatus::Infeasible:
        report.outcome = "infeasible";
        break;
      case ExactStatus::BudgetExhausted:
        report.outcome = "budget-exhausted";
        report.solution = result.solution;
        break;
    }
  } else if (args.method == "round" || args.method == "round-general" ||
             args.method == "round-overlap") {
    LpModel model;
    if (args.method == "round-overlap") {
      if (!requirements.budget) throw ValidationError("--method round-overlap needs --budget");
      if (!requirements.overlap_budget) {
        throw ValidationError("--method round-overlap needs --overlap-budget");
      }
      model = build_overlap_lp(instance, requirements);
    } else {
      model = build_relaxation(instance, requirements);
    }
    const LpSolution lp = solve_lp(model);
    report.diagnostics["lp_pivots"] = static_cast<double>(lp.pivots);
    if (lp.status != LpStatus::Optimal) {
      report.outcome = "no feasible solution";
    } else {
      report.diagnostics["lp_objective"] = lp.objective;
      RoundingOutcome outcome;
      if (args.method == "round") {
        outcome = round_basic(model, lp, instance, requirements, rounding_config);
      } else if (args.method == "round-general") {
        outcome = round_general(model, lp, instance, requirements, rounding_config);
      } else {
        outcome = round_overlap(model, lp, instance, requirements, rounding_config);
      }
      report.diagnostics["rounds_run"] = static_cast<double>(outcome.rounds.size());
      if (outcome.status == RoundingStatus::Accepted) {
        report.outcome = "solution";
        report.solution = outcome.solution;
        report.diagnostics["accepted_round"] = static_cast<double>(*outcome.accepted_round);
      } else {
        report.outcome = "failure";
      }
    }
  } else if (args.method == "dp") {
    if (!requirements.budget) throw ValidationError("--method dp needs --budget");
    const DpResult result = dp_solve(instance, *requirements.budget, requirements);
    if (result.status == DpStatus::Found) {
      report.outcome = "solution";
      report.solution = result.solution;
      report.diagnostics["dp_weight_1"] = static_cast<double>(result.weights[0]);
      report.diagnostics["dp_weight_2"] = static_cast<double>(result.weights[1]);
    } else {
      report.outcome = "infeasible";
    }
  } else if (args.method == "greedy") {
    if (!requirements.budget) throw ValidationError("--method greedy needs --budget");
    const GreedyResult result =
        greedy_maximize(instance, requirements.coverage, *requirements.budget);
    report.solution = elements_to_solution(
        std::span<const GroundElement>(result.selection.data(), result.selection.size()),
        instance.cluster_count());
    report.outcome = "solution";
    report.diagnostics["saturation_total"] = result.value.total;
    for (std::size_t l = 0; l < result.value.per_cluster.size(); ++l) {
      report.diagnostics["saturation_" + std::to_string(l)] = result.value.per_cluster[l];
    }
  } else {
    throw ValidationError("unknown --method '" + args.method + "'");
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  if (args.timings) {
    report.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
  }

  finalize_report(report, instance);
  write_output(args.out, args.format == "csv" ? report_to_csv(report) : report_to_json(report));
  if (report.solution && args.solution_out) {
    write_output(args.solution_out, serialize_solution(*report.solution));
  }
  return report.outcome == "solution" ? kExitSolved : kExitNoSolution;
}

struct StatsArgs {
  std::string instance_path;
};

int run_stats(const StatsArgs& args) {
  const InstanceDocument document = parse_instance(read_file(args.instance_path));
  const Instance& instance = document.instance;
  const InstanceStats s = stats(instance);
  long long incidence = 0;
  for (const ObjectRecord& obj : instance.objects()) {
    incidence += static_cast<long long>(obj.tags.size());
  }
  const double cells =
      static_cast<double>(instance.object_count()) * static_cast<double>(instance.tag_count());
  std::ostringstream out;
  out << "n: " << instance.object_count() << "\n";
  out << "m: " << instance.tag_count() << "\n";
  out << "k: " << instance.cluster_count() << "\n";
  out << "cluster_sizes:";
  for (int size : instance.cluster_sizes()) out << ' ' << size;
  out << "\n";
  out << "eta: " << s.eta << "\n";
  out << "gamma: " << s.gamma << "\n";
  out << "delta: " << s.delta << "\n";
  out << "density: " << (cells > 0 ? static_cast<double>(incidence) / cells : 0.0) << "\n";
  std::cout << out.str();
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained cluster-descriptor solvers"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Solve one instance with one method");
  solve->add_option("--instance", solve_args.instance_path, "Instance file")->required();
  solve->add_option("--method", solve_args.method,
                    "ilp|round|round-general|round-overlap|dp|greedy")
      ->required();
  solve->add_option("--coverage", solve_args.coverage_list, "Per-cluster targets M_1,...,M_k");
  solve->add_option("--coverage-frac", solve_args.coverage_frac,
                    "Targets as ceil(f * cluster size)");
  solve->add_option("--budget", solve_args.budget, "Tag budget B");
  solve->add_option("--overlap-budget", solve_args.overlap_budget, "Overlap budget B_o");
  solve->add_option("--seed", solve_args.seed, "RNG seed");
  solve->add_option("--rounds", solve_args.rounds, "Rounding retries (0 = ceil(4 ln n))");
  solve->add_option("--epsilon", solve_args.epsilon, "Epsilon for round-general");
  std::string solve_out;
  solve->add_option("--out", solve_out, "Report path (default stdout)");
  std::string solution_out;
  solve->add_option("--solution-out", solution_out, "Solution file path");
  solve->add_option("--format", solve_args.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_flag("--timings", solve_args.timings, "Include wall time in the report");

  struct GenArgs {
    int n = 0, m = 0, k = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::string out;
  } gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  gen->add_option("--n", gen_args.n, "Objects")->required();
  gen->add_option("--m", gen_args.m, "Tags")->required();
  gen->add_option("--k", gen_args.k, "Clusters")->required();
  gen->add_option("--p", gen_args.p, "Per-(object, tag) membership probability")->required();
  gen->add_option("--seed", gen_args.seed, "RNG seed");
  gen->add_option("--out", gen_args.out, "Output path (default stdout)");

  StatsArgs stats_args;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Print instance statistics");
  stats_cmd->add_option("--instance", stats_args.instance_path, "Instance file")->required();

  struct TransformArgs {
    std::string instance_path;
    std::string op;
    std::string spec;
    std::string out;
  } transform_args;
  CLI::App* transform = app.add_subcommand("transform", "Rewrite an instance");
  transform->add_option("--instance", transform_args.instance_path, "Instance file")->required();
  transform->add_option("--op", transform_args.op, "extend-pairs|merge-clusters")->required();
  transform->add_option("--spec", transform_args.spec,
                        "merge-clusters groups, e.g. \"1,2|3,4\" (cluster labels)");
  transform->add_option("--out", transform_args.out, "Output path (default stdout)");

  struct ExperimentArgs {
    std::string instance_path;
    std::string sweep;
    std::string budgets;
    std::string fractions;
    std::string seeds;
    std::string coverage;
    double coverage_frac = 0.7;
    int rounds = 10;
    int jobs = default_jobs();
    std::string out;
  } experiment_args;
  CLI::App* experiment = app.add_subcommand("experiment", "Run a sweep and emit CSV");
  experiment->add_option("--instance", experiment_args.instance_path, "Instance file")->required();
  experiment->add_option("--sweep", experiment_args.sweep,
                         "coverage-vs-cost|cost-vs-coverage|approx-ratio")
      ->required();
  experiment->add_option("--budgets", experiment_args.budgets, "Budget grid, e.g. 0,1,2,3");
  experiment->add_option("--fracs", experiment_args.fractions, "Coverage-fraction grid");
  experiment->add_option("--seeds", experiment_args.seeds, "Seed list, e.g. 1,2,3");
  experiment->add_option("--coverage", experiment_args.coverage, "Explicit targets M_1,...,M_k");
  experiment->add_option("--coverage-frac", experiment_args.coverage_frac,
                         "Targets as ceil(f * cluster size) for approx-ratio");
  experiment->add_option("--rounds", experiment_args.rounds, "Rounding retries per point");
  experiment->add_option("--jobs", experiment_args.jobs,
                         "Concurrent grid points (default CLUSTER_DESCRIBE_JOBS or 1)");
  experiment->add_option("--out", experiment_args.out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      SolveArgs args = solve_args;
      if (!solve_out.empty()) args.out = solve_out;
      if (!solution_out.empty()) args.solution_out = solution_out;
      return run_solve(args);
    }
    if (gen->parsed()) {
      const Instance instance =
          gen_synthetic(gen_args.n, gen_args.m, gen_args.k, gen_args.p, gen_args.seed);
      write_output(gen_args.out.empty() ? std::nullopt : std::make_optional(gen_args.out),
                   serialize_instance(instance));
      return kExitSolved;
    }
    if (stats_cmd->parsed()) {
      return run_stats(stats_args);
    }
    if (transform->parsed()) {
      const InstanceDocument document = parse_instance(read_file(transform_args.instance_path));
      std::string serialized;
      if (transform_args.op == "extend-pairs") {
        const PairExtension extension = extend_pairs(document.instance);
        InstanceDocument extended = default_document(Instance(extension.extended));
        extended.object_labels = document.object_labels;
        extended.cluster_labels = document.cluster_labels;
        serialized = serialize_instance(extended);
      } else if (transform_args.op == "merge-clusters") {
        if (transform_args.spec.empty()) {
          throw ValidationError("--op merge-clusters needs --spec");
        }
        std::vector<std::vector<std::string>> groups;
        std::stringstream stream(transform_args.spec);
        std::string group;
        while (std::getline(stream, group, '|')) {
          std::vector<std::string> labels;
          std::stringstream inner(group);
          std::string label;
          while (std::getline(inner, label, ',')) labels.push_back(label);
          groups.push_back(std::move(labels));
        }
        serialized = serialize_instance(merge_clusters(document, groups));
      } else {
        throw ValidationError("unknown --op '" + transform_args.op + "'");
      }
      write_output(
          transform_args.out.empty() ? std::nullopt : std::make_optional(transform_args.out),
          serialized);
      return kExitSolved;
    }
    if (experiment->parsed()) {
      const InstanceDocument document = parse_instance(read_file(experiment_args.instance_path));
      SweepOptions options;
      options.coverage_fraction = experiment_args.coverage_frac;
      options.rounds = experiment_args.rounds;
      options.jobs = experiment_args.jobs;
      if (!experiment_args.budgets.empty()) {
        options.budgets = parse_int_list(experiment_args.budgets, "--budgets");
      }
      if (!experiment_args.fractions.empty()) {
        options.fractions = parse_double_list(experiment_args.fractions, "--fracs");
      }
      if (!experiment_args.seeds.empty()) {
        options.seeds.clear();
        for (int seed : parse_int_list(experiment_args.seeds, "--seeds")) {
          options.seeds.push_back(static_cast<std::uint64_t>(seed));
        }
      }
      if (!experiment_args.coverage.empty()) {
        options.coverage = parse_int_list(experiment_args.coverage, "--coverage");
      }
      std::string csv;
      if (experiment_args.sweep == "coverage-vs-cost") {
        if (options.budgets.empty()) throw ValidationError("--sweep coverage-vs-cost needs --budgets");
        csv = sweep_coverage_vs_cost(document, options);
      } else if (experiment_args.sweep == "cost-vs-coverage") {
        if (options.fractions.empty()) throw ValidationError("--sweep cost-vs-coverage needs --fracs");
        csv = sweep_cost_vs_coverage(document, options);
      } else if (experiment_args.sweep == "approx-ratio") {
        if (options.budgets.empty()) throw ValidationError("--sweep approx-ratio needs --budgets");
        csv = sweep_approx_ratio(document, options);
      } else {
        throw ValidationError("unknown --sweep '" + experiment_args.sweep + "'");
      }
      write_output(
          experiment_args.out.empty() ? std::nullopt : std::make_optional(experiment_args.out),
          csv);
      return kExitSolved;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoSolution;
  }
  return kExitUsage;
}
