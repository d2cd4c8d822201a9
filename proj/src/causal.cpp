#include "evrel/causal.hpp"

#include <algorithm>

#include "evrel/error.hpp"

namespace evrel {

namespace {

const Cluster& require_cluster(const CorefPartition& p, std::string_view id) {
  const Cluster* c = p.find(id);
  if (c == nullptr) throw Error(ErrorCode::kNotFound, "unknown cluster " + std::string(id), {std::string(id)});
  return *c;
}

}  // namespace

std::vector<std::string> preceding_candidates(const CorefPartition& partition,
                                              const RelationMatrix& m, std::string_view focal) {
  const Cluster& target = require_cluster(partition, focal);
  std::vector<std::string> out;
  // clusters() is kept in representative text order
  for (const auto& c : partition.clusters()) {
    if (c.id() == target.id()) continue;
    if (cluster_relation(m, c, target) == TemporalLabel::kBefore) out.push_back(c.id());
  }
  return out;
}

CausalState record_causes(const CausalState& s, const CorefPartition& partition,
                          const RelationMatrix& m, std::string_view focal,
                          const std::vector<std::string>& causes) {
  const auto candidates = preceding_candidates(partition, m, focal);
  std::vector<std::string> rejected;
  for (const auto& c : causes) {
    if (std::find(candidates.begin(), candidates.end(), c) == candidates.end()) rejected.push_back(c);
  }
  if (!rejected.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "cause must precede effect: not a preceding event of " + std::string(focal), rejected);
  }
  CausalState out = s;
  const std::string effect(focal);
  // revisiting a focal replaces its earlier answer
  std::erase_if(out.links, [&](const CausalLink& l) { return l.effect == effect; });
  for (const auto& c : causes) out.links.insert({c, effect});
  out.handled.insert(effect);
  return out;
}

std::optional<std::string> next_unhandled_causal(const CausalState& s,
                                                 const CorefPartition& partition,
                                                 const RelationMatrix& m) {
  for (const auto& c : partition.clusters()) {
    if (s.handled.count(c.id())) continue;
    if (!preceding_candidates(partition, m, c.id()).empty()) return c.id();
  }
  return std::nullopt;
}

std::vector<CausalLink> invalid_links(const CausalState& s, const CorefPartition& partition,
                                      const RelationMatrix& m) {
  std::vector<CausalLink> out;
  for (const auto& link : s.links) {
    const Cluster* cause = partition.find(link.cause);
    const Cluster* effect = partition.find(link.effect);
    bool ok = cause != nullptr && effect != nullptr;
    if (ok) {
      try {
        ok = cluster_relation(m, *cause, *effect) == TemporalLabel::kBefore;
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) out.push_back(link);
  }
  return out;
}

}  // namespace evrel
