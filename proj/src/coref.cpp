#include "evrel/coref.hpp"

#include <algorithm>

#include "evrel/error.hpp"

namespace evrel {

bool Cluster::contains(std::string_view id) const {
  return std::find(members.begin(), members.end(), id) != members.end();
}

const Cluster* CorefPartition::cluster_of(std::string_view mention) const {
  for (const auto& c : clusters_) {
    if (c.contains(mention)) return &c;
  }
  return nullptr;
}

const Cluster* CorefPartition::find(std::string_view cluster_id) const {
  for (const auto& c : clusters_) {
    if (c.id() == cluster_id) return &c;
  }
  return nullptr;
}

void CorefPartition::remove_member(std::string_view mention) {
  for (auto& c : clusters_) {
    std::erase(c.members, mention);
  }
  std::erase_if(clusters_, [](const Cluster& c) { return c.members.empty(); });
}

void CorefPartition::dissolve(std::string_view cluster_id) {
  std::erase_if(clusters_, [&](const Cluster& c) { return c.id() == cluster_id; });
}

void CorefPartition::put_cluster(Cluster cluster) {
  for (const auto& id : cluster.members) remove_member(id);
  clusters_.push_back(std::move(cluster));
}

void CorefPartition::sort_clusters(const RelationMatrix& m) {
  std::sort(clusters_.begin(), clusters_.end(), [&](const Cluster& a, const Cluster& b) {
    return m.require_index(a.id()) < m.require_index(b.id());
  });
}

namespace {

void require_complete(const RelationMatrix& m, const char* step) {
  const auto status = m.completion_status();
  if (!status.complete) {
    throw Error(ErrorCode::kPrecondition,
                std::string(step) + " requires a complete, conflict-free temporal annotation");
  }
}

void sort_by_text(std::vector<std::string>& ids, const RelationMatrix& m) {
  std::sort(ids.begin(), ids.end(),
            [&](const auto& a, const auto& b) { return m.require_index(a) < m.require_index(b); });
}

std::vector<std::string> equal_set(const RelationMatrix& m, std::size_t focal) {
  std::vector<std::string> out;
  for (std::size_t other = 0; other < m.size(); ++other) {
    if (other != focal && m.label(focal, other) == TemporalLabel::kEqual) {
      out.push_back(m.mention_ids()[other]);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> equal_candidates(const RelationMatrix& m, std::string_view focal) {
  const std::size_t f = m.require_index(focal);
  require_complete(m, "coreference");
  return equal_set(m, f);
}

FormClusterResult form_cluster(const CorefPartition& p, const RelationMatrix& m,
                               std::string_view focal, const std::vector<std::string>& selected,
                               bool confirm) {
  const std::string focal_id(focal);
  const auto candidates = equal_candidates(m, focal);
  std::vector<std::string> chosen = selected;
  sort_by_text(chosen, m);
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  std::vector<std::string> outside;
  for (const auto& id : chosen) {
    if (std::find(candidates.begin(), candidates.end(), id) == candidates.end()) outside.push_back(id);
  }
  if (!outside.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "selected mentions do not temporally co-occur (EQUAL) with " + focal_id, outside);
  }

  FormClusterResult result;
  result.partition = p;
  const Cluster* own = p.cluster_of(focal_id);
  for (const auto& id : chosen) {
    const Cluster* current = p.cluster_of(id);
    if (current != nullptr && current != own && current->members.size() > 1) result.conflicts.push_back({id, current->id()});
  }
  if (!result.conflicts.empty() && !confirm) return result;

  CorefPartition& out = result.partition;
  // members of the focal's previous cluster that were not reselected go back
  // to the queue
  if (own != nullptr) {
    for (const auto& member : own->members) {
      if (member != focal_id && std::find(chosen.begin(), chosen.end(), member) == chosen.end()) {
        out.unmark_handled(member);
      }
    }
    out.dissolve(own->id());
  }
  if (!chosen.empty()) {
    Cluster cluster;
    cluster.members = chosen;
    cluster.members.push_back(focal_id);
    sort_by_text(cluster.members, m);
    out.put_cluster(std::move(cluster));
  } else {
    out.remove_member(focal_id);
  }
  out.mark_handled(focal_id);
  for (const auto& id : chosen) out.mark_handled(id);
  out.sort_clusters(m);
  result.applied = true;
  return result;
}

std::optional<std::string> next_unhandled_coref(const CorefPartition& p, const RelationMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& id = m.mention_ids()[i];
    if (p.is_handled(id)) continue;
    if (!equal_set(m, i).empty()) return id;
  }
  return std::nullopt;
}

CorefPartition finalize_singletons(const CorefPartition& p, const RelationMatrix& m) {
  if (auto pending = next_unhandled_coref(p, m)) {
    throw Error(ErrorCode::kPrecondition, "unhandled coreference focal mention: " + *pending,
                {*pending});
  }
  CorefPartition out = p;
  for (const auto& id : m.mention_ids()) {
    if (out.cluster_of(id) == nullptr) out.put_cluster(Cluster{{id}});
  }
  out.sort_clusters(m);
  return out;
}

TemporalLabel cluster_relation(const RelationMatrix& m, const Cluster& a, const Cluster& b) {
  const auto reference = m.label(a.representative(), b.representative());
  if (!reference) {
    throw Error(ErrorCode::kIntegrity,
                "no temporal label between " + a.representative() + " and " + b.representative());
  }
  for (const auto& x : a.members) {
    for (const auto& y : b.members) {
      if (m.label(x, y) != reference) {
        throw Error(ErrorCode::kIntegrity,
                    "cluster relation is not uniform: " + x + "/" + y + " disagrees with " +
                        a.representative() + "/" + b.representative(),
                    {x, y});
      }
    }
  }
  return *reference;
}

std::vector<std::string> invalid_clusters(const CorefPartition& p, const RelationMatrix& m) {
  std::vector<std::string> out;
  for (const auto& c : p.clusters()) {
    bool ok = true;
    for (std::size_t x = 0; x < c.members.size() && ok; ++x) {
      if (!m.index_of(c.members[x])) ok = false;
      for (std::size_t y = x + 1; y < c.members.size() && ok; ++y) {
        if (!m.index_of(c.members[y]) || m.label(c.members[x], c.members[y]) != TemporalLabel::kEqual) {
          ok = false;
        }
      }
    }
    if (!ok) out.push_back(c.id());
  }
  return out;
}

}  // namespace evrel
