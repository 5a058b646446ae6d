#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clusterdesc/instance.hpp"
#include "clusterdesc/lp.hpp"

namespace clusterdesc {

struct RoundingConfig {
  std::uint64_t seed = 0;
  // Retry count; 0 means the default of ceil(4 ln n) with a floor of 8.
  int rounds = 0;
  // Epsilon of the arbitrary-target scheme.
  double epsilon = 0.1;
  // Acceptance fraction c of the arbitrary-target scheme; unset means the
  // guarantee-matching default 0.14 * (1 - epsilon).
  std::optional<double> accept_fraction_c;

  int resolved_rounds(int object_count) const;
  double resolved_accept_fraction() const;
};

int default_round_count(int object_count);  // ceil(4 ln n), floor 8

enum class RoundingStatus : std::uint8_t { Accepted, Failure };

struct RoundDiagnostics {
  std::vector<int> covered;  // Z_l per cluster
  int cost = 0;
  int overlap = 0;
};

struct RoundingOutcome {
  RoundingStatus status = RoundingStatus::Failure;
  std::optional<Solution> solution;
  std::optional<int> accepted_round;        // 0-based
  std::vector<RoundDiagnostics> rounds;     // one entry per executed round
};

// Halved categorical rounding of the relaxation optimum; accepts when every
// cluster covers at least M_l/8 and the cost is at most twice the LP value.
RoundingOutcome round_basic(const LpModel& model, const LpSolution& lp, const Instance& instance,
                            const Requirements& requirements, const RoundingConfig& config);

// Two-stage scheme for arbitrary targets: sample objects by z*, boost the
// halved x* by the sampled objects' 1/z*, then round categorically. Accepts
// when every cluster covers at least c * M_l at cost at most eta * B.
RoundingOutcome round_general(const LpModel& model, const LpSolution& lp, const Instance& instance,
                              const Requirements& requirements, const RoundingConfig& config);

// Joint four-way rounding of the k = 2 overlap LP. Accepts when both clusters
// cover at least M_l/8, cost is at most 3B and overlap at most 3 B_o.
RoundingOutcome round_overlap(const LpModel& model, const LpSolution& lp, const Instance& instance,
                              const Requirements& requirements, const RoundingConfig& config);

namespace detail {

// One round of each scheme on a derived stream; exposed so tests can audit
// per-round quantities on the exact code path the retry loop uses.

struct BasicRound {
  Solution solution;
  std::vector<int> covered;
  int cost = 0;
};
BasicRound basic_round_once(const LpModel& model, const LpSolution& lp, const Instance& instance,
                            std::uint64_t stream_seed);

struct GeneralRound {
  Solution solution;
  std::vector<int> covered;
  int cost = 0;
  std::vector<char> sampled;          // object picked into C'_l
  std::vector<double> boosted_probs;  // x'_l(j), cluster-major
};
GeneralRound general_round_once(const LpModel& model, const LpSolution& lp,
                                const Instance& instance, std::uint64_t stream_seed);

// z* raised to min(1, sum_{j in t_i} x*_l(j)); the normalization the
// analysis assumes without loss of generality.
std::vector<double> tightened_object_values(const LpModel& model, const LpSolution& lp,
                                            const Instance& instance);

struct OverlapRound {
  Solution solution;
  std::vector<int> covered;
  int cost = 0;
  int overlap = 0;
};
OverlapRound overlap_round_once(const LpModel& model, const LpSolution& lp,
                                const Instance& instance, std::uint64_t stream_seed);

}  // namespace detail

}  // namespace clusterdesc
