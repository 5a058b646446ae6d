#include "clusterdesc/submodular.hpp"

#include <algorithm>
#include <cmath>

namespace clusterdesc {

bool is_independent(std::span<const GroundElement> elements, int budget) {
  if (static_cast<int>(elements.size()) > budget) return false;
  std::vector<TagId> tags;
  tags.reserve(elements.size());
  for (const GroundElement& e : elements) tags.push_back(e.tag);
  std::sort(tags.begin(), tags.end());
  return std::adjacent_find(tags.begin(), tags.end()) == tags.end();
}

Solution elements_to_solution(std::span<const GroundElement> elements, int cluster_count) {
  Solution solution = Solution::empty(cluster_count);
  for (const GroundElement& e : elements) {
    solution.descriptors[static_cast<std::size_t>(e.cluster)].push_back(e.tag);
  }
  for (auto& descriptor : solution.descriptors) {
    std::sort(descriptor.begin(), descriptor.end());
    descriptor.erase(std::unique(descriptor.begin(), descriptor.end()), descriptor.end());
  }
  return solution;
}

namespace {

SaturationEval eval_from_covered(const std::vector<int>& covered, const std::vector<int>& targets) {
  SaturationEval eval;
  eval.per_cluster.resize(targets.size());
  for (std::size_t l = 0; l < targets.size(); ++l) {
    eval.per_cluster[l] =
        targets[l] > 0 ? std::min(1.0, static_cast<double>(covered[l]) / targets[l]) : 1.0;
    eval.total += eval.per_cluster[l];
  }
  return eval;
}

// Incremental coverage bookkeeping for greedy: per-object hit counts against
// the object's own cluster descriptor.
class CoverageState {
 public:
  explicit CoverageState(const Instance& instance)
      : instance_(instance),
        hits_(static_cast<std::size_t>(instance.object_count()), 0),
        covered_(static_cast<std::size_t>(instance.cluster_count()), 0) {}

  void add(const GroundElement& e) {
    for (int i : instance_.objects_with_tag(e.tag)) {
      if (instance_.object(i).cluster != e.cluster) continue;
      if (hits_[static_cast<std::size_t>(i)]++ == 0) {
        covered_[static_cast<std::size_t>(e.cluster)] += 1;
      }
    }
  }

  // Newly covered objects if `e` were added.
  int gain_count(const GroundElement& e) const {
    int gain = 0;
    for (int i : instance_.objects_with_tag(e.tag)) {
      if (instance_.object(i).cluster != e.cluster) continue;
      if (hits_[static_cast<std::size_t>(i)] == 0) ++gain;
    }
    return gain;
  }

  const std::vector<int>& covered() const { return covered_; }

 private:
  const Instance& instance_;
  std::vector<int> hits_;
  std::vector<int> covered_;
};

double saturation_gain(int covered, int gained, int target) {
  if (target <= 0) return 0.0;
  const double before = std::min(1.0, static_cast<double>(covered) / target);
  const double after = std::min(1.0, static_cast<double>(covered + gained) / target);
  return after - before;
}

}  // namespace

SaturationEval saturation_value(std::span<const GroundElement> elements, const Instance& instance,
                                const std::vector<int>& targets) {
  if (static_cast<int>(targets.size()) != instance.cluster_count()) {
    throw ValidationError("target vector length does not match the cluster count");
  }
  const Solution solution = elements_to_solution(elements, instance.cluster_count());
  return eval_from_covered(coverage(instance, solution), targets);
}

GreedyResult greedy_maximize(const Instance& instance, const std::vector<int>& targets,
                             int budget) {
  if (static_cast<int>(targets.size()) != instance.cluster_count()) {
    throw ValidationError("target vector length does not match the cluster count");
  }
  if (budget < 0) throw ValidationError("greedy needs a nonnegative budget");

  const int k = instance.cluster_count();
  const int m = instance.tag_count();
  CoverageState state(instance);

  // Stale gains are upper bounds (submodularity), so a candidate whose cached
  // gain cannot beat the current best is skipped without re-evaluation.
  // Candidates are scanned in (cluster, tag) order and ties keep the first,
  // i.e. the lowest (cluster, tag) element.
  std::vector<double> cached(static_cast<std::size_t>(k) * static_cast<std::size_t>(m), 0.0);
  for (int l = 0; l < k; ++l) {
    for (TagId j = 0; j < m; ++j) {
      const GroundElement e{l, j};
      cached[static_cast<std::size_t>(l * m + j)] =
          saturation_gain(0, state.gain_count(e), targets[static_cast<std::size_t>(l)]);
    }
  }

  GreedyResult result;
  std::vector<char> tag_used(static_cast<std::size_t>(m), 0);
  while (static_cast<int>(result.selection.size()) < budget) {
    double best_gain = 0.0;
    int best_cluster = -1;
    TagId best_tag = -1;
    for (int l = 0; l < k; ++l) {
      for (TagId j = 0; j < m; ++j) {
        if (tag_used[static_cast<std::size_t>(j)]) continue;
        double& cache = cached[static_cast<std::size_t>(l * m + j)];
        if (cache <= best_gain) continue;
        cache = saturation_gain(state.covered()[static_cast<std::size_t>(l)],
                                state.gain_count({l, j}),
                                targets[static_cast<std::size_t>(l)]);
        if (cache > best_gain) {
          best_gain = cache;
          best_cluster = l;
          best_tag = j;
        }
      }
    }
    if (best_cluster < 0) break;  // no positive marginal gain remains
    const GroundElement pick{best_cluster, best_tag};
    state.add(pick);
    tag_used[static_cast<std::size_t>(best_tag)] = 1;
    result.selection.push_back(pick);
  }
  result.value = eval_from_covered(state.covered(), targets);
  return result;
}

BudgetSearchResult budget_search(const Instance& instance, const std::vector<int>& targets,
                                 double alpha) {
  if (alpha <= 0.0 || alpha > 1.0) {
    throw ValidationError("budget search needs alpha in (0, 1]");
  }
  const int m = instance.tag_count();
  BudgetSearchResult result;
  if (m < 1) return result;

  // The greedy selection order is budget-independent; one full run gives
  // every prefix. Coverage of the b-prefix is monotone in b.
  const GreedyResult full = greedy_maximize(instance, targets, m);

  auto prefix_ok = [&](int b) {
    const auto take = static_cast<std::size_t>(
        std::min<int>(b, static_cast<int>(full.selection.size())));
    const Solution solution = elements_to_solution(
        std::span<const GroundElement>(full.selection.data(), take), instance.cluster_count());
    const std::vector<int> covered = coverage(instance, solution);
    for (int l = 0; l < instance.cluster_count(); ++l) {
      if (static_cast<double>(covered[static_cast<std::size_t>(l)]) <
          alpha * targets[static_cast<std::size_t>(l)] - 1e-9) {
        return false;
      }
    }
    return true;
  };

  if (!prefix_ok(m)) return result;  // not found even with every tag allowed
  int lo = 1;
  int hi = m;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (prefix_ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  result.found = true;
  result.budget = lo;
  const auto take =
      static_cast<std::size_t>(std::min<int>(lo, static_cast<int>(full.selection.size())));
  result.selection.assign(full.selection.begin(), full.selection.begin() + static_cast<long>(take));
  return result;
}

}  // namespace clusterdesc
