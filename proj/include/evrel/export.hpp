#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evrel/causal.hpp"
#include "evrel/document.hpp"
#include "evrel/labels.hpp"

namespace evrel {

// A finished annotation read back from the export format.
struct ExportedAnnotation {
  std::string doc_id;
  std::string annotator_id;
  std::vector<std::string> mentions;               // text order
  std::vector<std::vector<std::string>> clusters;  // each in text order; id = front()
  std::map<PairKey, TemporalLabel> mention_labels; // canonical text-order pairs
  std::map<std::pair<std::string, std::string>, TemporalLabel> cluster_labels;
  std::set<CausalLink> causal;
  nlohmann::json stats;

  // Cluster id of a mention, empty if not clustered.
  std::string cluster_of(const std::string& mention) const;
  // Oriented mention label, reading the stored pair through invert.
  std::optional<TemporalLabel> label(const std::string& a, const std::string& b) const;
};

// Parses and re-validates every invariant of an export: the partition covers
// the mentions, all pairs are labeled without conflict, cluster members
// co-occur, cluster labels are uniform and causes precede effects. Throws
// Error(kFormat) for shape problems and Error(kIntegrity) for violations.
ExportedAnnotation validate_export(const nlohmann::json& j);

}  // namespace evrel
