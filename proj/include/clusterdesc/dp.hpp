#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clusterdesc/instance.hpp"

namespace clusterdesc {

enum class DpStatus : std::uint8_t { Found, Infeasible };

struct DpResult {
  DpStatus status = DpStatus::Infeasible;
  std::optional<Solution> solution;
  int used_budget = 0;                // |X_1| + |X_2| of the reconstruction
  std::vector<long long> weights;     // sum |E_d(j)| over the chosen tags, per cluster
};

inline constexpr long long kDpStateCap = 100'000'000;  // (m+1)(B+1)(M1+1)(M2+1)

// Weight-reachability dynamic program for k = 2: finds disjoint (X_1, X_2)
// with |X_1|+|X_2| <= budget and per-cluster weight sums meeting the targets,
// which covers at least M_d / gamma objects per cluster.
DpResult dp_solve(const Instance& instance, int budget, const Requirements& requirements);

// The table's reachability predicate, exposed for oracle comparisons.
bool dp_reachable(const Instance& instance, int budget, const Requirements& requirements);

}  // namespace clusterdesc
