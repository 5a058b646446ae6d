#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clusterdesc/errors.hpp"

namespace clusterdesc {

using TagId = std::int32_t;
using ClusterId = std::int32_t;

// One object: its cluster and its (sorted, deduplicated) tag set.
struct ObjectRecord {
  ClusterId cluster = 0;
  std::vector<TagId> tags;
};

// A clustered, tagged object collection. Immutable after construction;
// ids are dense integers, external labels live in the io layer.
class Instance {
 public:
  // Validates cluster/tag ranges and normalizes tag lists (sort + dedup).
  Instance(std::vector<ObjectRecord> objects, int cluster_count, int tag_count);

  int object_count() const { return static_cast<int>(objects_.size()); }
  int cluster_count() const { return k_; }
  int tag_count() const { return m_; }

  const ObjectRecord& object(int i) const { return objects_[static_cast<std::size_t>(i)]; }
  const std::vector<ObjectRecord>& objects() const { return objects_; }
  const std::vector<int>& cluster_sizes() const { return cluster_sizes_; }

  // E(j): indices of the objects carrying tag j.
  const std::vector<int>& objects_with_tag(TagId j) const {
    return tag_objects_[static_cast<std::size_t>(j)];
  }

  // |E_d(j)|: objects of cluster d carrying tag j.
  int cluster_reach(ClusterId cluster, TagId j) const;

  // Objects in cluster `cluster` with at least one tag.
  int coverable_count(ClusterId cluster) const {
    return coverable_counts_[static_cast<std::size_t>(cluster)];
  }

 private:
  std::vector<ObjectRecord> objects_;
  int k_ = 0;
  int m_ = 0;
  std::vector<int> cluster_sizes_;
  std::vector<int> coverable_counts_;
  std::vector<std::vector<int>> tag_objects_;
};

// Per-cluster coverage targets plus the optional cost/overlap budgets.
struct Requirements {
  std::vector<int> coverage;  // M_l, one per cluster
  std::optional<int> budget;  // B
  std::optional<int> overlap_budget;  // B_o
};

// k descriptors, one tag set per cluster.
struct Solution {
  std::vector<std::vector<TagId>> descriptors;

  static Solution empty(int cluster_count) {
    Solution s;
    s.descriptors.resize(static_cast<std::size_t>(cluster_count));
    return s;
  }
};

// eta / gamma / delta and their per-element arrays.
struct InstanceStats {
  int eta = 0;    // max_j |E(j)|
  int gamma = 0;  // max_i |t_i|
  int delta = 0;  // max_i Delta(i)
  std::vector<int> tag_reach;          // |E(j)| per tag
  std::vector<int> object_dependence;  // Delta(i) per object (self included)
};

struct DisjointnessViolation {
  TagId tag = 0;
  std::vector<ClusterId> clusters;  // all clusters whose descriptor holds the tag
};

struct FeasibilityReport {
  std::vector<int> covered;  // |V_l(X)| per cluster
  int cost = 0;              // sum |X_l|
  int overlap = 0;           // sum over unordered pairs |X_l intersect X_l'|
  std::vector<DisjointnessViolation> disjointness_violations;
  bool disjoint = false;
  bool feasible_disjoint = false;  // coverage met and descriptors disjoint
  bool feasible_overlap = false;   // coverage met and overlap within budget
};

// |V_l(X)| for each cluster. Does not require disjoint descriptors.
std::vector<int> coverage(const Instance& instance, const Solution& solution);

InstanceStats stats(const Instance& instance);

FeasibilityReport validate_solution(const Instance& instance,
                                    const Requirements& requirements,
                                    const Solution& solution);

// Rejects requirements whose shape or targets cannot be met structurally
// (wrong length, negative entries, or M_l above the coverable count).
void validate_requirements(const Instance& instance, const Requirements& requirements);

}  // namespace clusterdesc
