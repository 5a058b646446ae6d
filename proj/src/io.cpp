#include "clusterdesc/io.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "clusterdesc/rng.hpp"

namespace clusterdesc {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ParseError(std::string(what) + ": malformed JSON");
  }
  return doc;
}

const json& require_field(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) {
    throw ParseError(std::string("missing field '") + field + "'");
  }
  return *it;
}

int require_int(const json& doc, const char* field) {
  const json& value = require_field(doc, field);
  if (!value.is_number_integer()) {
    throw ParseError(std::string("field '") + field + "' must be an integer");
  }
  return value.get<int>();
}

}  // namespace

InstanceDocument parse_instance(std::string_view text) {
  const json doc = parse_json(text, "instance file");
  const int version = require_int(doc, "version");
  if (version != kInstanceFormatVersion) {
    throw ParseError("unsupported instance format version " + std::to_string(version));
  }
  const int n = require_int(doc, "n");
  const int m = require_int(doc, "m");
  const int k = require_int(doc, "k");

  const json& clusters = require_field(doc, "clusters");
  if (!clusters.is_array() || static_cast<int>(clusters.size()) != k) {
    throw ParseError("field 'clusters' must list exactly k labels");
  }
  std::vector<std::string> cluster_labels;
  std::unordered_map<std::string, int> cluster_index;
  for (const json& label : clusters) {
    if (!label.is_string()) throw ParseError("cluster labels must be strings");
    const auto text_label = label.get<std::string>();
    if (!cluster_index.emplace(text_label, static_cast<int>(cluster_labels.size())).second) {
      throw ParseError("duplicate cluster label '" + text_label + "'");
    }
    cluster_labels.push_back(text_label);
  }

  const json& objects = require_field(doc, "objects");
  if (!objects.is_array() || static_cast<int>(objects.size()) != n) {
    throw ParseError("field 'objects' must list exactly n objects");
  }
  std::vector<ObjectRecord> records;
  std::vector<std::string> object_labels;
  std::unordered_set<std::string> seen_ids;
  records.reserve(objects.size());
  int line = 0;
  for (const json& obj : objects) {
    ++line;
    const std::string locus = "object #" + std::to_string(line);
    if (!obj.is_object()) throw ParseError(locus + ": must be an object");
    const json& id = require_field(obj, "id");
    if (!id.is_string()) throw ParseError(locus + ": field 'id' must be a string");
    const auto id_text = id.get<std::string>();
    if (!seen_ids.insert(id_text).second) {
      throw ParseError(locus + ": duplicate object id '" + id_text + "'");
    }
    const json& cluster = require_field(obj, "cluster");
    if (!cluster.is_string()) throw ParseError(locus + ": field 'cluster' must be a string");
    const auto cluster_text = cluster.get<std::string>();
    const auto found = cluster_index.find(cluster_text);
    if (found == cluster_index.end()) {
      throw ParseError(locus + ": unknown cluster label '" + cluster_text + "'");
    }
    const json& tags = require_field(obj, "tags");
    if (!tags.is_array()) throw ParseError(locus + ": field 'tags' must be an array");
    ObjectRecord record;
    record.cluster = found->second;
    for (const json& tag : tags) {
      if (!tag.is_number_integer()) throw ParseError(locus + ": tags must be integers");
      const int t = tag.get<int>();
      if (t < 0 || t >= m) {
        throw ParseError(locus + ": tag index " + std::to_string(t) + " outside [0, " +
                         std::to_string(m) + ")");
      }
      record.tags.push_back(t);
    }
    records.push_back(std::move(record));
    object_labels.push_back(id_text);
  }

  std::optional<std::vector<std::string>> tag_labels;
  if (auto it = doc.find("tag_labels"); it != doc.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != m) {
      throw ParseError("field 'tag_labels' must list exactly m labels");
    }
    tag_labels.emplace();
    for (const json& label : *it) {
      if (!label.is_string()) throw ParseError("tag labels must be strings");
      tag_labels->push_back(label.get<std::string>());
    }
  }

  try {
    return InstanceDocument{Instance(std::move(records), k, m), std::move(object_labels),
                            std::move(cluster_labels), std::move(tag_labels)};
  } catch (const ValidationError& e) {
    throw ParseError(std::string("instance validation: ") + e.what());
  }
}

std::string serialize_instance(const InstanceDocument& document) {
  const Instance& instance = document.instance;
  json doc;
  doc["version"] = kInstanceFormatVersion;
  doc["n"] = instance.object_count();
  doc["m"] = instance.tag_count();
  doc["k"] = instance.cluster_count();
  doc["clusters"] = document.cluster_labels;
  json objects = json::array();
  for (int i = 0; i < instance.object_count(); ++i) {
    const ObjectRecord& record = instance.object(i);
    json obj;
    obj["id"] = document.object_labels[static_cast<std::size_t>(i)];
    obj["cluster"] = document.cluster_labels[static_cast<std::size_t>(record.cluster)];
    obj["tags"] = record.tags;  // instances keep tags sorted
    objects.push_back(std::move(obj));
  }
  doc["objects"] = std::move(objects);
  if (document.tag_labels) doc["tag_labels"] = *document.tag_labels;
  return doc.dump(2) + "\n";
}

InstanceDocument default_document(Instance instance) {
  std::vector<std::string> object_labels;
  object_labels.reserve(static_cast<std::size_t>(instance.object_count()));
  for (int i = 0; i < instance.object_count(); ++i) {
    object_labels.push_back("s" + std::to_string(i));
  }
  std::vector<std::string> cluster_labels;
  for (int l = 0; l < instance.cluster_count(); ++l) {
    cluster_labels.push_back("C" + std::to_string(l));
  }
  return InstanceDocument{std::move(instance), std::move(object_labels),
                          std::move(cluster_labels), std::nullopt};
}

std::string serialize_instance(const Instance& instance) {
  return serialize_instance(default_document(Instance(instance)));
}

Solution parse_solution(std::string_view text, int cluster_count) {
  const json doc = parse_json(text, "solution file");
  const json& descriptors = require_field(doc, "descriptors");
  if (!descriptors.is_array() || static_cast<int>(descriptors.size()) != cluster_count) {
    throw ParseError("field 'descriptors' must list exactly k tag lists");
  }
  Solution solution = Solution::empty(cluster_count);
  int index = 0;
  for (const json& list : descriptors) {
    if (!list.is_array()) throw ParseError("descriptors must be arrays of tag ids");
    for (const json& tag : list) {
      if (!tag.is_number_integer()) throw ParseError("descriptor tags must be integers");
      solution.descriptors[static_cast<std::size_t>(index)].push_back(tag.get<int>());
    }
    auto& descriptor = solution.descriptors[static_cast<std::size_t>(index)];
    std::sort(descriptor.begin(), descriptor.end());
    descriptor.erase(std::unique(descriptor.begin(), descriptor.end()), descriptor.end());
    ++index;
  }
  return solution;
}

std::string serialize_solution(const Solution& solution) {
  json doc;
  json descriptors = json::array();
  for (const auto& descriptor : solution.descriptors) {
    std::vector<TagId> sorted = descriptor;
    std::sort(sorted.begin(), sorted.end());
    descriptors.push_back(sorted);
  }
  doc["descriptors"] = std::move(descriptors);
  return doc.dump(2) + "\n";
}

Instance gen_synthetic(int n, int m, int k, double p, std::uint64_t seed) {
  if (n < 1 || m < 1) throw ValidationError("gen_synthetic needs n, m >= 1");
  if (k < 2) throw ValidationError("gen_synthetic needs k >= 2");
  if (p < 0.0 || p > 1.0) throw ValidationError("gen_synthetic needs p in [0, 1]");
  SplitMix64 rng(derive_stream(seed, 0x67656eULL));
  std::vector<ObjectRecord> records(static_cast<std::size_t>(n));
  for (auto& record : records) {
    record.cluster = static_cast<ClusterId>(rng.next_below(static_cast<std::uint64_t>(k)));
    for (TagId j = 0; j < m; ++j) {
      if (rng.next_double() < p) record.tags.push_back(j);
    }
  }
  return Instance(std::move(records), k, m);
}

PairExtension extend_pairs(const Instance& instance) {
  const long long m = instance.tag_count();
  const long long extended_size = m * (m + 1) / 2;
  if (extended_size > kPairExtensionCap) {
    throw SizeError("pair extension universe " + std::to_string(extended_size) +
                    " exceeds the cap of " + std::to_string(kPairExtensionCap));
  }

  PairExtension out;
  out.origin.reserve(static_cast<std::size_t>(extended_size));
  for (TagId j = 0; j < m; ++j) out.origin.push_back({j, -1});
  // Pair (j, j') with j < j' gets id m + offset(j) + (j' - j - 1).
  std::vector<long long> pair_base(static_cast<std::size_t>(std::max<long long>(m, 1)), 0);
  long long next = m;
  for (TagId j = 0; j < m; ++j) {
    pair_base[static_cast<std::size_t>(j)] = next;
    next += m - 1 - j;
    for (TagId j2 = j + 1; j2 < m; ++j2) out.origin.push_back({j, j2});
  }

  std::vector<ObjectRecord> records;
  records.reserve(static_cast<std::size_t>(instance.object_count()));
  for (const ObjectRecord& obj : instance.objects()) {
    ObjectRecord extended;
    extended.cluster = obj.cluster;
    extended.tags = obj.tags;
    for (std::size_t a = 0; a < obj.tags.size(); ++a) {
      for (std::size_t b = a + 1; b < obj.tags.size(); ++b) {
        const TagId j = obj.tags[a];
        const TagId j2 = obj.tags[b];
        extended.tags.push_back(
            static_cast<TagId>(pair_base[static_cast<std::size_t>(j)] + (j2 - j - 1)));
      }
    }
    records.push_back(std::move(extended));
  }
  out.extended =
      Instance(std::move(records), instance.cluster_count(), static_cast<int>(extended_size));
  return out;
}

InstanceDocument merge_clusters(const InstanceDocument& document,
                                const std::vector<std::vector<std::string>>& groups) {
  if (groups.size() < 2) throw ValidationError("merge needs at least 2 cluster groups");
  std::unordered_map<std::string, int> label_to_old;
  for (std::size_t l = 0; l < document.cluster_labels.size(); ++l) {
    label_to_old[document.cluster_labels[l]] = static_cast<int>(l);
  }
  std::vector<int> old_to_new(document.cluster_labels.size(), -1);
  std::vector<std::string> new_labels;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw ValidationError("empty cluster group in merge spec");
    std::string joined;
    for (const std::string& label : groups[g]) {
      const auto it = label_to_old.find(label);
      if (it == label_to_old.end()) {
        throw ValidationError("merge spec names unknown cluster '" + label + "'");
      }
      if (old_to_new[static_cast<std::size_t>(it->second)] != -1) {
        throw ValidationError("cluster '" + label + "' appears in more than one merge group");
      }
      old_to_new[static_cast<std::size_t>(it->second)] = static_cast<int>(g);
      if (!joined.empty()) joined += "+";
      joined += label;
    }
    new_labels.push_back(std::move(joined));
  }
  for (std::size_t l = 0; l < old_to_new.size(); ++l) {
    if (old_to_new[l] == -1) {
      throw ValidationError("cluster '" + document.cluster_labels[l] +
                            "' missing from the merge spec");
    }
  }

  std::vector<ObjectRecord> records;
  records.reserve(document.instance.objects().size());
  for (const ObjectRecord& obj : document.instance.objects()) {
    records.push_back({old_to_new[static_cast<std::size_t>(obj.cluster)], obj.tags});
  }
  return InstanceDocument{
      Instance(std::move(records), static_cast<int>(groups.size()), document.instance.tag_count()),
      document.object_labels, std::move(new_labels), document.tag_labels};
}

std::uint64_t instance_fingerprint(const InstanceDocument& document) {
  const std::string canonical = serialize_instance(document);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : canonical) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace clusterdesc
