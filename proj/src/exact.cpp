#include "clusterdesc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "clusterdesc/lp.hpp"
#include "clusterdesc/rng.hpp"

namespace clusterdesc {

namespace {

constexpr double kIntegralityTol = 1e-6;

// Incrementally maintained assignment state for the exhaustive searches:
// per-object count of descriptor tags, per-cluster covered counts.
class AssignmentState {
 public:
  explicit AssignmentState(const Instance& instance)
      : instance_(instance),
        hits_(static_cast<std::size_t>(instance.object_count()), 0),
        covered_(static_cast<std::size_t>(instance.cluster_count()), 0) {}

  void assign(TagId j, ClusterId l) {
    for (int i : instance_.objects_with_tag(j)) {
      if (instance_.object(i).cluster != l) continue;
      if (hits_[static_cast<std::size_t>(i)]++ == 0) {
        covered_[static_cast<std::size_t>(l)] += 1;
      }
    }
  }

  void unassign(TagId j, ClusterId l) {
    for (int i : instance_.objects_with_tag(j)) {
      if (instance_.object(i).cluster != l) continue;
      if (--hits_[static_cast<std::size_t>(i)] == 0) {
        covered_[static_cast<std::size_t>(l)] -= 1;
      }
    }
  }

  const std::vector<int>& covered() const { return covered_; }

  int total_covered() const {
    int total = 0;
    for (int c : covered_) total += c;
    return total;
  }

 private:
  const Instance& instance_;
  std::vector<int> hits_;
  std::vector<int> covered_;
};

Solution assignment_to_solution(const std::vector<int>& assignment, int k) {
  Solution solution = Solution::empty(k);
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (assignment[j] >= 0) {
      solution.descriptors[static_cast<std::size_t>(assignment[j])].push_back(
          static_cast<TagId>(j));
    }
  }
  return solution;
}

}  // namespace

ExactResult brute_force(const Instance& instance, const Requirements& requirements) {
  if (instance.tag_count() > kBruteForceTagCap) {
    throw SizeError("brute force refused: " + std::to_string(instance.tag_count()) +
                    " tags exceeds the cap of " + std::to_string(kBruteForceTagCap));
  }
  validate_requirements(instance, requirements);

  const int m = instance.tag_count();
  const int k = instance.cluster_count();
  AssignmentState state(instance);
  std::vector<int> assignment(static_cast<std::size_t>(m), -1);

  ExactResult result;
  result.status = ExactStatus::Infeasible;
  long long best = static_cast<long long>(m) + 1;
  long long nodes = 0;

  std::function<void(int, int)> descend = [&](int tag, int cost) {
    ++nodes;
    if (cost >= best) return;  // assignments only grow the cost from here
    if (tag == m) {
      for (int l = 0; l < k; ++l) {
        if (state.covered()[static_cast<std::size_t>(l)] <
            requirements.coverage[static_cast<std::size_t>(l)]) {
          return;
        }
      }
      best = cost;
      result.status = ExactStatus::Optimal;
      result.solution = assignment_to_solution(assignment, k);
      result.objective = cost;
      return;
    }
    descend(tag + 1, cost);
    for (int l = 0; l < k; ++l) {
      assignment[static_cast<std::size_t>(tag)] = l;
      state.assign(tag, l);
      descend(tag + 1, cost + 1);
      state.unassign(tag, l);
      assignment[static_cast<std::size_t>(tag)] = -1;
    }
  };
  descend(0, 0);
  result.nodes = nodes;
  return result;
}

namespace {

// Shared branch-and-bound over tag-assignment ILPs. Fixations pin x_l(j) to
// 0/1 through variable bounds; the LP relaxation provides the bound.
struct BnbProblem {
  const Instance& instance;
  LpModel root;                 // bounds copied per node
  bool maximize = false;        // cover_or_forget maximizes coverage
  long long node_limit = 1'000'000;
  // Incumbent check: returns the integral objective if the candidate solution
  // is feasible for the true problem.
  std::function<std::optional<long long>(const Solution&)> evaluate;
};

struct BnbNode {
  std::vector<std::pair<int, double>> fixed;  // (x variable, 0.0 or 1.0)
  double bound = 0.0;                         // parent LP objective
  int depth = 0;
  long long seq = 0;
};

struct NodeOrder {
  bool maximize;
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.depth != b.depth) return a.depth < b.depth;  // depth-first
    const double ba = maximize ? -a.bound : a.bound;
    const double bb = maximize ? -b.bound : b.bound;
    if (ba != bb) return ba > bb;  // tie: best bound first
    return a.seq > b.seq;
  }
};

struct BnbOutcome {
  std::optional<Solution> incumbent;
  long long incumbent_value = 0;
  bool proven = false;
  bool any_lp_feasible = false;
  long long nodes = 0;
};

Solution solution_from_lp(const LpModel& model, const std::vector<double>& values) {
  Solution solution = Solution::empty(model.clusters);
  for (int l = 0; l < model.clusters; ++l) {
    for (TagId j = 0; j < model.tags; ++j) {
      if (values[static_cast<std::size_t>(model.x_index(l, j))] > 0.5) {
        solution.descriptors[static_cast<std::size_t>(l)].push_back(j);
      }
    }
  }
  return solution;
}

// One categorical rounding pass over the LP's x values; used to seed the
// incumbent from the root relaxation.
Solution sample_solution(const LpModel& model, const std::vector<double>& values,
                         std::uint64_t seed, bool halve) {
  SplitMix64 rng(derive_stream(seed, 0));
  Solution solution = Solution::empty(model.clusters);
  for (TagId j = 0; j < model.tags; ++j) {
    const double u = rng.next_double();
    double cumulative = 0.0;
    for (int l = 0; l < model.clusters; ++l) {
      double p = values[static_cast<std::size_t>(model.x_index(l, j))];
      if (halve) p *= 0.5;
      cumulative += std::max(0.0, p);
      if (u < cumulative) {
        solution.descriptors[static_cast<std::size_t>(l)].push_back(j);
        break;
      }
    }
  }
  return solution;
}

BnbOutcome run_branch_and_bound(BnbProblem& problem) {
  BnbOutcome out;
  const bool maximize = problem.maximize;

  std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> open(NodeOrder{maximize});
  long long seq = 0;
  open.push(BnbNode{{}, maximize ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity(),
                    0, seq++});

  auto beats_incumbent = [&](double lp_objective) {
    if (!out.incumbent) return true;
    // Integral objectives: a node must admit an improvement of at least 1.
    if (maximize) {
      return lp_objective >= static_cast<double>(out.incumbent_value) + 1.0 - kIntegralityTol;
    }
    return lp_objective <= static_cast<double>(out.incumbent_value) - 1.0 + kIntegralityTol;
  };

  LpModel node_model = problem.root;
  bool at_root = true;
  while (!open.empty()) {
    if (out.nodes >= problem.node_limit) return out;  // proven stays false
    BnbNode node = open.top();
    open.pop();
    ++out.nodes;

    node_model.lower = problem.root.lower;
    node_model.upper = problem.root.upper;
    for (const auto& [v, value] : node.fixed) {
      node_model.lower[static_cast<std::size_t>(v)] = value;
      node_model.upper[static_cast<std::size_t>(v)] = value;
    }
    const LpSolution lp = solve_lp(node_model);
    if (lp.status != LpStatus::Optimal) continue;  // infeasible subtree
    out.any_lp_feasible = true;
    if (!beats_incumbent(lp.objective)) continue;

    if (at_root) {
      at_root = false;
      const Solution seeded =
          sample_solution(problem.root, lp.values, /*seed=*/0, /*halve=*/!maximize);
      if (auto value = problem.evaluate(seeded)) {
        out.incumbent = seeded;
        out.incumbent_value = *value;
      }
    }

    // Most fractional x variable; ties resolved by lowest (cluster, tag).
    int branch_var = -1;
    double best_frac = kIntegralityTol;
    for (int l = 0; l < problem.root.clusters; ++l) {
      for (TagId j = 0; j < problem.root.tags; ++j) {
        const int v = problem.root.x_index(l, j);
        const double x = lp.values[static_cast<std::size_t>(v)];
        const double frac = std::min(x, 1.0 - x);
        if (frac > best_frac + 1e-12) {
          best_frac = frac;
          branch_var = v;
        }
      }
    }

    if (branch_var < 0) {
      // Integral point: candidate solution.
      const Solution candidate = solution_from_lp(problem.root, lp.values);
      if (auto value = problem.evaluate(candidate)) {
        const bool improves = !out.incumbent || (maximize ? *value > out.incumbent_value
                                                          : *value < out.incumbent_value);
        if (improves) {
          out.incumbent = candidate;
          out.incumbent_value = *value;
        }
      }
      continue;
    }

    for (const double value : {1.0, 0.0}) {
      BnbNode child;
      child.fixed = node.fixed;
      child.fixed.push_back({branch_var, value});
      child.bound = lp.objective;
      child.depth = node.depth + 1;
      child.seq = seq++;
      open.push(std::move(child));
    }
  }
  out.proven = true;
  return out;
}

}  // namespace

ExactResult branch_and_bound(const Instance& instance, const Requirements& requirements,
                             long long node_limit) {
  validate_requirements(instance, requirements);
  BnbProblem problem{instance, build_relaxation(instance, requirements), /*maximize=*/false,
                     node_limit, {}};
  problem.evaluate = [&](const Solution& candidate) -> std::optional<long long> {
    const FeasibilityReport report = validate_solution(instance, requirements, candidate);
    if (!report.feasible_disjoint) return std::nullopt;
    return report.cost;
  };
  const BnbOutcome outcome = run_branch_and_bound(problem);

  ExactResult result;
  result.nodes = outcome.nodes;
  if (!outcome.proven) {
    result.status = ExactStatus::BudgetExhausted;
    if (outcome.incumbent) {
      result.solution = outcome.incumbent;
      result.objective = outcome.incumbent_value;
    }
    return result;
  }
  if (outcome.incumbent) {
    result.status = ExactStatus::Optimal;
    result.solution = outcome.incumbent;
    result.objective = outcome.incumbent_value;
  } else {
    result.status = ExactStatus::Infeasible;
  }
  return result;
}

ExactResult cover_or_forget(const Instance& instance, int budget, long long node_limit) {
  if (budget < 0) throw ValidationError("cover_or_forget needs a nonnegative budget");

  // Coverage-maximizing ILP: max sum z, disjoint tags, total cost <= budget.
  Requirements zero;
  zero.coverage.assign(static_cast<std::size_t>(instance.cluster_count()), 0);
  LpModel model = build_relaxation(instance, zero);
  model.sense = ObjectiveSense::Maximize;
  model.objective.clear();
  for (int i = 0; i < instance.object_count(); ++i) {
    model.objective.push_back({model.z_index(i), 1.0});
  }
  {
    LpRow row;
    row.sense = RowSense::Le;
    row.rhs = static_cast<double>(budget);
    for (int l = 0; l < instance.cluster_count(); ++l) {
      for (TagId j = 0; j < instance.tag_count(); ++j) {
        row.coeffs.push_back({model.x_index(l, j), 1.0});
      }
    }
    if (!row.coeffs.empty()) model.rows.push_back(std::move(row));
  }

  BnbProblem problem{instance, std::move(model), /*maximize=*/true, node_limit, {}};
  problem.evaluate = [&](const Solution& candidate) -> std::optional<long long> {
    int cost = 0;
    for (const auto& descriptor : candidate.descriptors) {
      cost += static_cast<int>(descriptor.size());
    }
    if (cost > budget) return std::nullopt;
    const std::vector<int> covered = coverage(instance, candidate);
    long long total = 0;
    for (int c : covered) total += c;
    return total;
  };
  const BnbOutcome outcome = run_branch_and_bound(problem);

  ExactResult result;
  result.nodes = outcome.nodes;
  if (!outcome.proven) {
    result.status = ExactStatus::BudgetExhausted;
    if (outcome.incumbent) {
      result.solution = outcome.incumbent;
      result.objective = outcome.incumbent_value;
    }
    return result;
  }
  result.status = ExactStatus::Optimal;
  if (outcome.incumbent) {
    result.solution = outcome.incumbent;
    result.objective = outcome.incumbent_value;
  } else {
    // Coverage 0 is always feasible (empty descriptors).
    result.solution = Solution::empty(instance.cluster_count());
    result.objective = 0;
  }
  return result;
}

}  // namespace clusterdesc
