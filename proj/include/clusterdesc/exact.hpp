#pragma once

#include <cstdint>
#include <optional>

#include "clusterdesc/instance.hpp"

namespace clusterdesc {

enum class ExactStatus : std::uint8_t { Optimal, Infeasible, BudgetExhausted };

struct ExactResult {
  ExactStatus status = ExactStatus::Infeasible;
  std::optional<Solution> solution;
  long long objective = 0;  // minimum cost, or maximum coverage for cover_or_forget
  long long nodes = 0;
};

// Enumerates every assignment of each tag to {unused, cluster 0..k-1}.
// Refused for tag universes above kBruteForceTagCap.
inline constexpr int kBruteForceTagCap = 15;
ExactResult brute_force(const Instance& instance, const Requirements& requirements);

// LP-based branch and bound for the min-cost disjoint-descriptor ILP.
ExactResult branch_and_bound(const Instance& instance, const Requirements& requirements,
                             long long node_limit = 1'000'000);

// Baseline: maximize total coverage under a tag budget with disjoint
// descriptors and no per-cluster guarantees.
ExactResult cover_or_forget(const Instance& instance, int budget,
                            long long node_limit = 1'000'000);

}  // namespace clusterdesc
