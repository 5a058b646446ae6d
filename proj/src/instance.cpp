#include "clusterdesc/instance.hpp"

#include <algorithm>

namespace clusterdesc {

Instance::Instance(std::vector<ObjectRecord> objects, int cluster_count, int tag_count)
    : objects_(std::move(objects)), k_(cluster_count), m_(tag_count) {
  if (k_ < 2) {
    throw ValidationError("instance requires at least 2 clusters, got " + std::to_string(k_));
  }
  if (m_ < 0) {
    throw ValidationError("negative tag-universe size");
  }
  cluster_sizes_.assign(static_cast<std::size_t>(k_), 0);
  coverable_counts_.assign(static_cast<std::size_t>(k_), 0);
  tag_objects_.assign(static_cast<std::size_t>(m_), {});
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    ObjectRecord& obj = objects_[i];
    if (obj.cluster < 0 || obj.cluster >= k_) {
      throw ValidationError("object " + std::to_string(i) + ": cluster index " +
                            std::to_string(obj.cluster) + " out of range [0, " +
                            std::to_string(k_) + ")");
    }
    std::sort(obj.tags.begin(), obj.tags.end());
    obj.tags.erase(std::unique(obj.tags.begin(), obj.tags.end()), obj.tags.end());
    for (TagId t : obj.tags) {
      if (t < 0 || t >= m_) {
        throw ValidationError("object " + std::to_string(i) + ": tag id " + std::to_string(t) +
                              " out of range [0, " + std::to_string(m_) + ")");
      }
      tag_objects_[static_cast<std::size_t>(t)].push_back(static_cast<int>(i));
    }
    cluster_sizes_[static_cast<std::size_t>(obj.cluster)] += 1;
    if (!obj.tags.empty()) {
      coverable_counts_[static_cast<std::size_t>(obj.cluster)] += 1;
    }
  }
}

int Instance::cluster_reach(ClusterId cluster, TagId j) const {
  int count = 0;
  for (int i : tag_objects_[static_cast<std::size_t>(j)]) {
    if (objects_[static_cast<std::size_t>(i)].cluster == cluster) ++count;
  }
  return count;
}

namespace {

void check_solution_shape(const Instance& instance, const Solution& solution) {
  if (static_cast<int>(solution.descriptors.size()) != instance.cluster_count()) {
    throw ValidationError("solution has " + std::to_string(solution.descriptors.size()) +
                          " descriptors, instance has " +
                          std::to_string(instance.cluster_count()) + " clusters");
  }
  for (const auto& descriptor : solution.descriptors) {
    for (TagId t : descriptor) {
      if (t < 0 || t >= instance.tag_count()) {
        throw ValidationError("descriptor tag id " + std::to_string(t) +
                              " out of range [0, " + std::to_string(instance.tag_count()) + ")");
      }
    }
  }
}

}  // namespace

std::vector<int> coverage(const Instance& instance, const Solution& solution) {
  check_solution_shape(instance, solution);
  const int k = instance.cluster_count();
  std::vector<char> in_descriptor(static_cast<std::size_t>(instance.tag_count()) *
                                      static_cast<std::size_t>(k),
                                  0);
  for (int l = 0; l < k; ++l) {
    for (TagId t : solution.descriptors[static_cast<std::size_t>(l)]) {
      in_descriptor[static_cast<std::size_t>(t) * static_cast<std::size_t>(k) +
                    static_cast<std::size_t>(l)] = 1;
    }
  }
  std::vector<int> covered(static_cast<std::size_t>(k), 0);
  for (const ObjectRecord& obj : instance.objects()) {
    for (TagId t : obj.tags) {
      if (in_descriptor[static_cast<std::size_t>(t) * static_cast<std::size_t>(k) +
                        static_cast<std::size_t>(obj.cluster)]) {
        covered[static_cast<std::size_t>(obj.cluster)] += 1;
        break;
      }
    }
  }
  return covered;
}

InstanceStats stats(const Instance& instance) {
  InstanceStats out;
  const int n = instance.object_count();
  const int m = instance.tag_count();
  out.tag_reach.assign(static_cast<std::size_t>(m), 0);
  for (TagId j = 0; j < m; ++j) {
    out.tag_reach[static_cast<std::size_t>(j)] =
        static_cast<int>(instance.objects_with_tag(j).size());
    out.eta = std::max(out.eta, out.tag_reach[static_cast<std::size_t>(j)]);
  }
  out.object_dependence.assign(static_cast<std::size_t>(n), 0);
  // Delta(i) = |union of E(j) over j in t_i|; an object with tags depends on
  // itself. Stamp-marking keeps this near-linear in the incidence size.
  std::vector<int> stamp(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const ObjectRecord& obj = instance.object(i);
    out.gamma = std::max(out.gamma, static_cast<int>(obj.tags.size()));
    int dependence = 0;
    for (TagId j : obj.tags) {
      for (int other : instance.objects_with_tag(j)) {
        if (stamp[static_cast<std::size_t>(other)] != i) {
          stamp[static_cast<std::size_t>(other)] = i;
          ++dependence;
        }
      }
    }
    out.object_dependence[static_cast<std::size_t>(i)] = dependence;
    out.delta = std::max(out.delta, dependence);
  }
  return out;
}

FeasibilityReport validate_solution(const Instance& instance, const Requirements& requirements,
                                    const Solution& solution) {
  check_solution_shape(instance, solution);
  if (static_cast<int>(requirements.coverage.size()) != instance.cluster_count()) {
    throw ValidationError("requirements have " + std::to_string(requirements.coverage.size()) +
                          " coverage targets, instance has " +
                          std::to_string(instance.cluster_count()) + " clusters");
  }
  FeasibilityReport report;
  report.covered = coverage(instance, solution);

  const int k = instance.cluster_count();
  std::vector<std::vector<ClusterId>> holders(static_cast<std::size_t>(instance.tag_count()));
  for (int l = 0; l < k; ++l) {
    std::vector<TagId> seen = solution.descriptors[static_cast<std::size_t>(l)];
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    report.cost += static_cast<int>(seen.size());
    for (TagId t : seen) holders[static_cast<std::size_t>(t)].push_back(l);
  }
  for (TagId t = 0; t < instance.tag_count(); ++t) {
    const auto& hs = holders[static_cast<std::size_t>(t)];
    if (hs.size() > 1) {
      // Overlap counts unordered cluster pairs sharing the tag.
      report.overlap += static_cast<int>(hs.size() * (hs.size() - 1) / 2);
      report.disjointness_violations.push_back({t, hs});
    }
  }
  report.disjoint = report.disjointness_violations.empty();

  bool coverage_met = true;
  for (int l = 0; l < k; ++l) {
    if (report.covered[static_cast<std::size_t>(l)] <
        requirements.coverage[static_cast<std::size_t>(l)]) {
      coverage_met = false;
    }
  }
  report.feasible_disjoint = report.disjoint && coverage_met;
  const int overlap_cap =
      requirements.overlap_budget ? *requirements.overlap_budget : instance.tag_count() * k;
  report.feasible_overlap = coverage_met && report.overlap <= overlap_cap;
  return report;
}

void validate_requirements(const Instance& instance, const Requirements& requirements) {
  if (static_cast<int>(requirements.coverage.size()) != instance.cluster_count()) {
    throw ValidationError("requirements have " + std::to_string(requirements.coverage.size()) +
                          " coverage targets, instance has " +
                          std::to_string(instance.cluster_count()) + " clusters");
  }
  for (int l = 0; l < instance.cluster_count(); ++l) {
    const int target = requirements.coverage[static_cast<std::size_t>(l)];
    if (target < 0) {
      throw ValidationError("cluster " + std::to_string(l) + ": negative coverage target");
    }
    if (target > instance.coverable_count(l)) {
      throw ValidationError("cluster " + std::to_string(l) + ": coverage target " +
                            std::to_string(target) + " exceeds coverable objects (" +
                            std::to_string(instance.coverable_count(l)) + ")");
    }
  }
  if (requirements.budget && *requirements.budget < 0) {
    throw ValidationError("negative budget");
  }
  if (requirements.overlap_budget && *requirements.overlap_budget < 0) {
    throw ValidationError("negative overlap budget");
  }
}

}  // namespace clusterdesc
