#pragma once

#include <span>
#include <vector>

#include "clusterdesc/instance.hpp"

namespace clusterdesc {

// Ground-set element: "assign tag `tag` to cluster `cluster`". Ordered by
// (cluster, tag) for deterministic tie-breaking.
struct GroundElement {
  ClusterId cluster = 0;
  TagId tag = 0;

  friend bool operator==(const GroundElement&, const GroundElement&) = default;
  friend auto operator<=>(const GroundElement& a, const GroundElement& b) {
    if (auto c = a.cluster <=> b.cluster; c != 0) return c;
    return a.tag <=> b.tag;
  }
};

// Independence in the partition-and-uniform matroid: at most one element per
// tag and at most `budget` elements in total.
bool is_independent(std::span<const GroundElement> elements, int budget);

// X^A: the descriptors induced by an element set.
Solution elements_to_solution(std::span<const GroundElement> elements, int cluster_count);

struct SaturationEval {
  std::vector<double> per_cluster;  // F_l in [0, 1]; 1 when M_l = 0
  double total = 0.0;
};

// F(A) = sum_l min(|V_l(X^A)| / M_l, 1).
SaturationEval saturation_value(std::span<const GroundElement> elements, const Instance& instance,
                                const std::vector<int>& targets);

struct GreedyResult {
  std::vector<GroundElement> selection;  // in pick order
  SaturationEval value;
};

// Lazy greedy over the matroid; stops at zero marginal gain or budget. The
// selection order does not depend on the budget, so a budget-B run is the
// B-prefix of the unbounded run.
GreedyResult greedy_maximize(const Instance& instance, const std::vector<int>& targets,
                             int budget);

struct BudgetSearchResult {
  bool found = false;
  int budget = 0;
  std::vector<GroundElement> selection;
};

// Smallest budget in [1, m] whose greedy prefix covers at least
// alpha * M_l in every cluster, by binary search over the (monotone) prefix
// predicate.
BudgetSearchResult budget_search(const Instance& instance, const std::vector<int>& targets,
                                 double alpha);

}  // namespace clusterdesc
