#include "clusterdesc/rounding.hpp"

#include <algorithm>
#include <cmath>

#include "clusterdesc/rng.hpp"

namespace clusterdesc {

namespace {

constexpr double kProbSlack = 1e-9;

void require_optimal(const LpSolution& lp) {
  if (lp.status != LpStatus::Optimal) {
    throw ValidationError("rounding requires an optimal LP solution");
  }
}

void require_shape(const LpModel& model, const Instance& instance) {
  if (model.clusters != instance.cluster_count() || model.tags != instance.tag_count() ||
      model.objects != instance.object_count()) {
    throw ValidationError("lp model shape does not match the instance");
  }
}

// Probabilities may carry solver noise; clamp within the slack, abort beyond.
double checked_probability(double p, const char* what) {
  if (p < -kProbSlack || p > 1.0 + kProbSlack) {
    throw NumericalError(std::string(what) + " probability " + std::to_string(p) +
                         " outside [0,1] beyond slack");
  }
  return std::clamp(p, 0.0, 1.0);
}

int solution_cost(const Solution& solution) {
  int cost = 0;
  for (const auto& descriptor : solution.descriptors) cost += static_cast<int>(descriptor.size());
  return cost;
}

// Categorical pass over tags: each tag lands in one cluster or nowhere.
Solution sample_categorical(const std::vector<double>& probs, int clusters, int tags,
                            SplitMix64& rng) {
  Solution solution = Solution::empty(clusters);
  for (TagId j = 0; j < tags; ++j) {
    double total = 0.0;
    for (int l = 0; l < clusters; ++l) {
      total += probs[static_cast<std::size_t>(l * tags + j)];
    }
    checked_probability(total, "categorical total");
    const double u = rng.next_double();
    double cumulative = 0.0;
    for (int l = 0; l < clusters; ++l) {
      cumulative += probs[static_cast<std::size_t>(l * tags + j)];
      if (u < cumulative) {
        solution.descriptors[static_cast<std::size_t>(l)].push_back(j);
        break;
      }
    }
  }
  return solution;
}

}  // namespace

int default_round_count(int object_count) {
  const int computed =
      static_cast<int>(std::ceil(4.0 * std::log(std::max(object_count, 2))));
  return std::max(8, computed);
}

int RoundingConfig::resolved_rounds(int object_count) const {
  return rounds > 0 ? rounds : default_round_count(object_count);
}

double RoundingConfig::resolved_accept_fraction() const {
  return accept_fraction_c ? *accept_fraction_c : 0.14 * (1.0 - epsilon);
}

namespace detail {

BasicRound basic_round_once(const LpModel& model, const LpSolution& lp, const Instance& instance,
                            std::uint64_t stream_seed) {
  const int k = model.clusters;
  const int m = model.tags;
  std::vector<double> probs(static_cast<std::size_t>(k) * static_cast<std::size_t>(m), 0.0);
  for (int l = 0; l < k; ++l) {
    for (TagId j = 0; j < m; ++j) {
      const double x = lp.values[static_cast<std::size_t>(model.x_index(l, j))];
      probs[static_cast<std::size_t>(l * m + j)] = checked_probability(x, "x") / 2.0;
    }
  }
  SplitMix64 rng(stream_seed);
  BasicRound round;
  round.solution = sample_categorical(probs, k, m, rng);
  round.covered = coverage(instance, round.solution);
  round.cost = solution_cost(round.solution);
  return round;
}

std::vector<double> tightened_object_values(const LpModel& model, const LpSolution& lp,
                                            const Instance& instance) {
  std::vector<double> z(static_cast<std::size_t>(model.objects), 0.0);
  for (int i = 0; i < model.objects; ++i) {
    const ObjectRecord& obj = instance.object(i);
    double mass = 0.0;
    for (TagId j : obj.tags) {
      mass += lp.values[static_cast<std::size_t>(model.x_index(obj.cluster, j))];
    }
    const double tightened = std::min(1.0, mass);
    const double original =
        checked_probability(lp.values[static_cast<std::size_t>(model.z_index(i))], "z");
    z[static_cast<std::size_t>(i)] = std::max(original, tightened);
  }
  return z;
}

GeneralRound general_round_once(const LpModel& model, const LpSolution& lp,
                                const Instance& instance, std::uint64_t stream_seed) {
  const int k = model.clusters;
  const int m = model.tags;
  const std::vector<double> z = tightened_object_values(model, lp, instance);

  SplitMix64 rng(stream_seed);
  GeneralRound round;
  round.sampled.assign(static_cast<std::size_t>(model.objects), 0);
  for (int i = 0; i < model.objects; ++i) {
    const double zi = z[static_cast<std::size_t>(i)];
    if (zi < kProbSlack) continue;  // below tolerance: never sampled
    if (rng.next_double() < zi) round.sampled[static_cast<std::size_t>(i)] = 1;
  }

  // x'_l(j) = (x*_l(j)/2) * max{1/z(i) : sampled i in C'_l with j in t_i},
  // zero when no sampled carrier exists, clamped to [0, 1/2].
  round.boosted_probs.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(m), 0.0);
  for (TagId j = 0; j < m; ++j) {
    for (int l = 0; l < k; ++l) {
      double boost = 0.0;
      for (int i : instance.objects_with_tag(j)) {
        if (!round.sampled[static_cast<std::size_t>(i)]) continue;
        if (instance.object(i).cluster != l) continue;
        boost = std::max(boost, 1.0 / z[static_cast<std::size_t>(i)]);
      }
      if (boost == 0.0) continue;
      const double x =
          checked_probability(lp.values[static_cast<std::size_t>(model.x_index(l, j))], "x");
      round.boosted_probs[static_cast<std::size_t>(l * m + j)] =
          std::min(0.5, (x / 2.0) * boost);
    }
  }

  round.solution = sample_categorical(round.boosted_probs, k, m, rng);
  round.covered = coverage(instance, round.solution);
  round.cost = solution_cost(round.solution);
  return round;
}

OverlapRound overlap_round_once(const LpModel& model, const LpSolution& lp,
                                const Instance& instance, std::uint64_t stream_seed) {
  const int m = model.tags;
  SplitMix64 rng(stream_seed);
  OverlapRound round;
  round.solution = Solution::empty(2);
  for (TagId j = 0; j < m; ++j) {
    const double x1 = checked_probability(lp.values[static_cast<std::size_t>(model.x_index(0, j))], "x1");
    const double x2 = checked_probability(lp.values[static_cast<std::size_t>(model.x_index(1, j))], "x2");
    double y = checked_probability(lp.values[static_cast<std::size_t>(model.y_index(j))], "y");
    // The LP only lower-bounds y; clamp to the joint-probability range.
    y = std::min({y, x1, x2});
    const double p_both = y;
    const double p_one = checked_probability(x1 - y, "only-first");
    const double p_two = checked_probability(x2 - y, "only-second");
    checked_probability(1.0 - x1 - x2 + y, "neither");
    const double u = rng.next_double();
    const bool in_first = u < p_both + p_one;
    const bool in_second = u < p_both || (u >= p_both + p_one && u < p_both + p_one + p_two);
    if (in_first) round.solution.descriptors[0].push_back(j);
    if (in_second) round.solution.descriptors[1].push_back(j);
    if (in_first && in_second) round.overlap += 1;
  }
  round.covered = coverage(instance, round.solution);
  round.cost = solution_cost(round.solution);
  return round;
}

}  // namespace detail

RoundingOutcome round_basic(const LpModel& model, const LpSolution& lp, const Instance& instance,
                            const Requirements& requirements, const RoundingConfig& config) {
  require_optimal(lp);
  require_shape(model, instance);
  const double lp_cost = lp.objective;
  const int retries = config.resolved_rounds(instance.object_count());

  RoundingOutcome outcome;
  for (int r = 0; r < retries; ++r) {
    detail::BasicRound round =
        detail::basic_round_once(model, lp, instance, derive_stream(config.seed, r));
    outcome.rounds.push_back({round.covered, round.cost, 0});
    bool ok = round.cost <= 2.0 * lp_cost + kProbSlack;
    for (int l = 0; l < instance.cluster_count() && ok; ++l) {
      // Z_l >= M_l / 8, checked in exact integer arithmetic.
      ok = 8LL * round.covered[static_cast<std::size_t>(l)] >=
           requirements.coverage[static_cast<std::size_t>(l)];
    }
    if (ok) {
      outcome.status = RoundingStatus::Accepted;
      outcome.solution = std::move(round.solution);
      outcome.accepted_round = r;
      return outcome;
    }
  }
  return outcome;
}

RoundingOutcome round_general(const LpModel& model, const LpSolution& lp, const Instance& instance,
                              const Requirements& requirements, const RoundingConfig& config) {
  require_optimal(lp);
  require_shape(model, instance);
  const double lp_cost = lp.objective;
  const double eta = static_cast<double>(stats(instance).eta);
  const double accept_c = config.resolved_accept_fraction();
  const int retries = config.resolved_rounds(instance.object_count());

  RoundingOutcome outcome;
  for (int r = 0; r < retries; ++r) {
    detail::GeneralRound round =
        detail::general_round_once(model, lp, instance, derive_stream(config.seed, r));
    outcome.rounds.push_back({round.covered, round.cost, 0});
    bool ok = round.cost <= eta * lp_cost + kProbSlack;
    for (int l = 0; l < instance.cluster_count() && ok; ++l) {
      ok = static_cast<double>(round.covered[static_cast<std::size_t>(l)]) >=
           accept_c * requirements.coverage[static_cast<std::size_t>(l)] - kProbSlack;
    }
    if (ok) {
      outcome.status = RoundingStatus::Accepted;
      outcome.solution = std::move(round.solution);
      outcome.accepted_round = r;
      return outcome;
    }
  }
  return outcome;
}

RoundingOutcome round_overlap(const LpModel& model, const LpSolution& lp, const Instance& instance,
                              const Requirements& requirements, const RoundingConfig& config) {
  if (instance.cluster_count() != 2) {
    throw UnsupportedError("overlap rounding is defined for k = 2");
  }
  if (!model.has_overlap_vars) {
    throw ValidationError("overlap rounding needs the overlap LP model");
  }
  if (!requirements.budget || !requirements.overlap_budget) {
    throw ValidationError("overlap rounding needs budget and overlap_budget");
  }
  require_optimal(lp);
  require_shape(model, instance);
  const long long budget = *requirements.budget;
  const long long overlap_budget = *requirements.overlap_budget;
  const int retries = config.resolved_rounds(instance.object_count());

  RoundingOutcome outcome;
  for (int r = 0; r < retries; ++r) {
    detail::OverlapRound round =
        detail::overlap_round_once(model, lp, instance, derive_stream(config.seed, r));
    outcome.rounds.push_back({round.covered, round.cost, round.overlap});
    bool ok = round.cost <= 3 * budget && round.overlap <= 3 * overlap_budget;
    for (int l = 0; l < 2 && ok; ++l) {
      ok = 8LL * round.covered[static_cast<std::size_t>(l)] >=
           requirements.coverage[static_cast<std::size_t>(l)];
    }
    if (ok) {
      outcome.status = RoundingStatus::Accepted;
      outcome.solution = std::move(round.solution);
      outcome.accepted_round = r;
      return outcome;
    }
  }
  return outcome;
}

}  // namespace clusterdesc
