#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evrel/labels.hpp"
#include "evrel/temporal.hpp"

namespace evrel {

// A coreference cluster is identified by its representative, the member
// earliest in text order.
struct Cluster {
  std::vector<std::string> members;  // text order

  const std::string& id() const { return members.front(); }
  const std::string& representative() const { return members.front(); }
  bool contains(std::string_view id) const;

  bool operator==(const Cluster&) const = default;
};

class CorefPartition {
 public:
  const std::vector<Cluster>& clusters() const { return clusters_; }
  const std::set<std::string>& handled() const { return handled_; }

  const Cluster* cluster_of(std::string_view mention) const;
  const Cluster* find(std::string_view cluster_id) const;
  bool is_handled(std::string_view mention) const { return handled_.count(std::string(mention)) > 0; }

  // Mutators used by the engine functions and by session repair.
  void mark_handled(const std::string& mention) { handled_.insert(mention); }
  void unmark_handled(const std::string& mention) { handled_.erase(mention); }
  void remove_member(std::string_view mention);
  void dissolve(std::string_view cluster_id);
  // Replaces the cluster containing members.front()'s mentions; members must
  // be in text order and disjoint from every other cluster.
  void put_cluster(Cluster cluster);
  void sort_clusters(const RelationMatrix& m);

  bool operator==(const CorefPartition&) const = default;

 private:
  std::vector<Cluster> clusters_;
  std::set<std::string> handled_;
};

struct MembershipConflict {
  std::string mention;
  std::string current_cluster;  // cluster id the mention belongs to now
};

struct FormClusterResult {
  CorefPartition partition;
  std::vector<MembershipConflict> conflicts;
  bool applied = false;  // false while conflicts await confirmation
};

// Mentions whose resolved temporal label with `focal` is EQUAL, text order.
// Requires a complete, conflict-free matrix.
std::vector<std::string> equal_candidates(const RelationMatrix& m, std::string_view focal);

// Makes {focal} ∪ selected the focal's cluster. If a selected mention
// already sits in another cluster the partition is returned unchanged with
// the conflicts listed, unless `confirm` is set, in which case the mention
// moves out of its old cluster.
FormClusterResult form_cluster(const CorefPartition& p, const RelationMatrix& m,
                               std::string_view focal, const std::vector<std::string>& selected,
                               bool confirm = false);

std::optional<std::string> next_unhandled_coref(const CorefPartition& p, const RelationMatrix& m);

CorefPartition finalize_singletons(const CorefPartition& p, const RelationMatrix& m);

// Label between the two clusters' representatives; every cross pair must
// agree or Error(kIntegrity) is thrown.
TemporalLabel cluster_relation(const RelationMatrix& m, const Cluster& a, const Cluster& b);

// Clusters with a non-EQUAL internal pair under the current matrix.
std::vector<std::string> invalid_clusters(const CorefPartition& p, const RelationMatrix& m);

}  // namespace evrel
