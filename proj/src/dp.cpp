#include "clusterdesc/dp.hpp"

#include <algorithm>
#include <cstdint>

namespace clusterdesc {

namespace {

// One DP layer: reachable (budget, w1, w2) states, bit-packed. Weights
// saturate at the targets, so w_d = M_d means "at least M_d".
class Layer {
 public:
  Layer(int budget, int target1, int target2)
      : budget_(budget),
        target1_(target1),
        target2_(target2),
        stride2_(target2 + 1),
        stride1_(static_cast<std::size_t>(target1 + 1) * static_cast<std::size_t>(target2 + 1)),
        bits_((static_cast<std::size_t>(budget + 1) * stride1_ + 63) / 64, 0) {}

  std::size_t index(int used, int w1, int w2) const {
    return static_cast<std::size_t>(used) * stride1_ +
           static_cast<std::size_t>(w1) * static_cast<std::size_t>(stride2_) +
           static_cast<std::size_t>(w2);
  }

  bool get(int used, int w1, int w2) const {
    const std::size_t idx = index(used, w1, w2);
    return (bits_[idx >> 6] >> (idx & 63)) & 1ULL;
  }

  void set(int used, int w1, int w2) {
    const std::size_t idx = index(used, w1, w2);
    bits_[idx >> 6] |= 1ULL << (idx & 63);
  }

  // Applies the recurrence for one tag on top of `prev`: keep every state
  // (skip), and extend by assigning the tag to either descriptor.
  void advance(const Layer& prev, int reach1, int reach2) {
    bits_ = prev.bits_;  // skip choice
    for (int used = 0; used < budget_; ++used) {
      for (int w1 = 0; w1 <= target1_; ++w1) {
        for (int w2 = 0; w2 <= target2_; ++w2) {
          if (!prev.get(used, w1, w2)) continue;
          set(used + 1, std::min(w1 + reach1, target1_), w2);
          set(used + 1, w1, std::min(w2 + reach2, target2_));
        }
      }
    }
  }

  int budget() const { return budget_; }
  int target1() const { return target1_; }
  int target2() const { return target2_; }

 private:
  int budget_;
  int target1_;
  int target2_;
  int stride2_;
  std::size_t stride1_;
  std::vector<std::uint64_t> bits_;
};

struct DpShape {
  int budget;
  int target1;
  int target2;
  std::vector<int> reach1;  // |E_1(j)| per tag
  std::vector<int> reach2;  // |E_2(j)| per tag
};

DpShape prepare(const Instance& instance, int budget, const Requirements& requirements) {
  if (instance.cluster_count() != 2) {
    throw UnsupportedError("dp solve is defined for k = 2, got k = " +
                           std::to_string(instance.cluster_count()));
  }
  if (budget < 0) throw ValidationError("dp solve needs a nonnegative budget");
  validate_requirements(instance, requirements);
  DpShape shape;
  shape.budget = std::min(budget, instance.tag_count());
  shape.target1 = requirements.coverage[0];
  shape.target2 = requirements.coverage[1];
  const long long states = static_cast<long long>(instance.tag_count() + 1) *
                           (shape.budget + 1) * (shape.target1 + 1) * (shape.target2 + 1);
  if (states > kDpStateCap) {
    throw SizeError("dp state space " + std::to_string(states) + " exceeds the cap of " +
                    std::to_string(kDpStateCap));
  }
  shape.reach1.resize(static_cast<std::size_t>(instance.tag_count()));
  shape.reach2.resize(static_cast<std::size_t>(instance.tag_count()));
  for (TagId j = 0; j < instance.tag_count(); ++j) {
    shape.reach1[static_cast<std::size_t>(j)] = instance.cluster_reach(0, j);
    shape.reach2[static_cast<std::size_t>(j)] = instance.cluster_reach(1, j);
  }
  return shape;
}

}  // namespace

bool dp_reachable(const Instance& instance, int budget, const Requirements& requirements) {
  const DpShape shape = prepare(instance, budget, requirements);
  // Rolling two-layer reachability sweep.
  Layer current(shape.budget, shape.target1, shape.target2);
  current.set(0, 0, 0);
  Layer next = current;
  for (TagId j = 0; j < instance.tag_count(); ++j) {
    next.advance(current, shape.reach1[static_cast<std::size_t>(j)],
                 shape.reach2[static_cast<std::size_t>(j)]);
    std::swap(current, next);
  }
  for (int used = 0; used <= shape.budget; ++used) {
    if (current.get(used, shape.target1, shape.target2)) return true;
  }
  return false;
}

DpResult dp_solve(const Instance& instance, int budget, const Requirements& requirements) {
  DpResult result;
  if (!dp_reachable(instance, budget, requirements)) {
    result.status = DpStatus::Infeasible;
    return result;
  }

  // Second pass: keep every layer and derive the choices by walking backwards;
  // no per-state backpointers are stored.
  const DpShape shape = prepare(instance, budget, requirements);
  const int m = instance.tag_count();
  std::vector<Layer> layers;
  layers.reserve(static_cast<std::size_t>(m) + 1);
  layers.emplace_back(shape.budget, shape.target1, shape.target2);
  layers[0].set(0, 0, 0);
  for (TagId j = 0; j < m; ++j) {
    layers.emplace_back(shape.budget, shape.target1, shape.target2);
    layers.back().advance(layers[static_cast<std::size_t>(j)],
                          shape.reach1[static_cast<std::size_t>(j)],
                          shape.reach2[static_cast<std::size_t>(j)]);
  }

  int used = -1;
  for (int candidate = 0; candidate <= shape.budget; ++candidate) {
    if (layers[static_cast<std::size_t>(m)].get(candidate, shape.target1, shape.target2)) {
      used = candidate;
      break;
    }
  }

  Solution solution = Solution::empty(2);
  int w1 = shape.target1;
  int w2 = shape.target2;
  for (TagId j = m - 1; j >= 0; --j) {
    const Layer& prev = layers[static_cast<std::size_t>(j)];
    if (prev.get(used, w1, w2)) continue;  // tag skipped

    // Assigning j must explain the state; find a predecessor weight. With
    // saturation the predecessor of w_d = M_d is any value in
    // [M_d - reach, M_d]; below saturation it is exactly w_d - reach.
    const int reach1 = shape.reach1[static_cast<std::size_t>(j)];
    const int reach2 = shape.reach2[static_cast<std::size_t>(j)];
    bool placed = false;
    if (used > 0) {
      const int low1 = (w1 == shape.target1) ? std::max(0, w1 - reach1) : w1 - reach1;
      for (int p1 = low1; p1 <= w1 - (w1 == shape.target1 ? 0 : reach1) && !placed; ++p1) {
        if (p1 < 0) continue;
        if (prev.get(used - 1, p1, w2)) {
          solution.descriptors[0].push_back(j);
          used -= 1;
          w1 = p1;
          placed = true;
        }
      }
      if (!placed) {
        const int low2 = (w2 == shape.target2) ? std::max(0, w2 - reach2) : w2 - reach2;
        for (int p2 = low2; p2 <= w2 - (w2 == shape.target2 ? 0 : reach2) && !placed; ++p2) {
          if (p2 < 0) continue;
          if (prev.get(used - 1, w1, p2)) {
            solution.descriptors[1].push_back(j);
            used -= 1;
            w2 = p2;
            placed = true;
          }
        }
      }
    }
    if (!placed) {
      throw NumericalError("dp reconstruction found no predecessor at tag " + std::to_string(j));
    }
  }

  std::sort(solution.descriptors[0].begin(), solution.descriptors[0].end());
  std::sort(solution.descriptors[1].begin(), solution.descriptors[1].end());
  result.status = DpStatus::Found;
  result.weights.assign(2, 0);
  for (TagId j : solution.descriptors[0]) {
    result.weights[0] += shape.reach1[static_cast<std::size_t>(j)];
  }
  for (TagId j : solution.descriptors[1]) {
    result.weights[1] += shape.reach2[static_cast<std::size_t>(j)];
  }
  result.used_budget = static_cast<int>(solution.descriptors[0].size() +
                                        solution.descriptors[1].size());
  result.solution = std::move(solution);
  return result;
}

}  // namespace clusterdesc
