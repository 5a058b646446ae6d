#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clusterdesc/instance.hpp"

namespace clusterdesc {

// An instance together with its external labels. Internally everything is
// dense integer ids; labels only matter at the file boundary.
struct InstanceDocument {
  Instance instance;
  std::vector<std::string> object_labels;   // one per object, unique
  std::vector<std::string> cluster_labels;  // one per cluster, unique
  std::optional<std::vector<std::string>> tag_labels;  // one per tag when present
};

inline constexpr int kInstanceFormatVersion = 1;

// JSON instance file: version, n, m, k, clusters, objects, optional
// tag_labels. Serialization is canonical (sorted keys, sorted tag lists)
// and newline-terminated.
InstanceDocument parse_instance(std::string_view text);
std::string serialize_instance(const InstanceDocument& document);
std::string serialize_instance(const Instance& instance);  // default labels

InstanceDocument default_document(Instance instance);

// Solution file: {"descriptors": [[int], ...]}.
Solution parse_solution(std::string_view text, int cluster_count);
std::string serialize_solution(const Solution& solution);

// Independent per-(object, tag) memberships with probability p; clusters
// assigned uniformly at random. Deterministic under the seed.
Instance gen_synthetic(int n, int m, int k, double p, std::uint64_t seed);

// Extended-universe bookkeeping: ids below the original m are single tags,
// the rest are unordered pairs in lexicographic order.
struct PairExtension {
  Instance extended;
  std::vector<std::pair<TagId, TagId>> origin;  // (j, -1) single, (j, j') pair

  bool is_pair(TagId extended_id) const { return origin[static_cast<std::size_t>(extended_id)].second >= 0; }
};

inline constexpr long long kPairExtensionCap = 1'000'000;  // on m(m+1)/2

// Tag universe extended with every unordered pair; an object holds a pair
// exactly when it holds both members.
PairExtension extend_pairs(const Instance& instance);

// Merges clusters by label groups; every cluster label must appear in
// exactly one group. Group labels are joined with '+'.
InstanceDocument merge_clusters(const InstanceDocument& document,
                                const std::vector<std::vector<std::string>>& groups);

// FNV-1a over the canonical serialization; the instance fingerprint used in
// run reports.
std::uint64_t instance_fingerprint(const InstanceDocument& document);

}  // namespace clusterdesc
