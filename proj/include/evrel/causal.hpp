#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evrel/coref.hpp"
#include "evrel/temporal.hpp"

namespace evrel {

struct CausalLink {
  std::string cause;   // cluster id
  std::string effect;  // cluster id

  auto operator<=>(const CausalLink&) const = default;
};

// Annotator-asserted cause -> effect links between clusters. There is no
// closure: links are never derived from other links.
struct CausalState {
  std::set<CausalLink> links;
  std::set<std::string> handled;

  bool operator==(const CausalState&) const = default;
};

// Clusters strictly BEFORE `focal`, ordered by representative text order.
std::vector<std::string> preceding_candidates(const CorefPartition& partition,
                                              const RelationMatrix& m, std::string_view focal);

CausalState record_causes(const CausalState& s, const CorefPartition& partition,
                          const RelationMatrix& m, std::string_view focal,
                          const std::vector<std::string>& causes);

std::optional<std::string> next_unhandled_causal(const CausalState& s,
                                                  const CorefPartition& partition,
                                                  const RelationMatrix& m);

// Links whose clusters vanished or are no longer in BEFORE order.
std::vector<CausalLink> invalid_links(const CausalState& s, const CorefPartition& partition,
                                      const RelationMatrix& m);

}  // namespace evrel
