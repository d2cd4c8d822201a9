#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evrel/export.hpp"

namespace evrel {

enum class RelationKind { kTemporal, kCoreference, kCausal };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> parse_relation_kind(std::string_view text);

struct AgreementReport {
  RelationKind kind = RelationKind::kTemporal;
  std::size_t universe_size = 0;
  // Cohen's kappa (temporal, causal)
  std::optional<double> observed_agreement;
  std::optional<double> expected_agreement;
  std::optional<double> kappa;
  // B-Cubed (coreference)
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

nlohmann::json to_json(const AgreementReport& r);

// item id -> label
using ItemLabels = std::map<std::string, std::string>;

// Pairwise Cohen's kappa with per-annotator marginals. Both maps must label
// exactly the same items. When label_set is given every label must be in it.
AgreementReport cohen_kappa(const ItemLabels& a, const ItemLabels& b,
                            const std::vector<std::string>& label_set = {},
                            RelationKind kind = RelationKind::kTemporal);
AgreementReport cohen_kappa(std::span<const std::string> a, std::span<const std::string> b,
                            RelationKind kind = RelationKind::kTemporal);

using Partition = std::vector<std::vector<std::string>>;

// Per-mention B-Cubed; `system` is the first partition, `reference` the second.
AgreementReport bcubed_f1(const Partition& system, const Partition& reference);

struct PhaseWorkload {
  double manual_steps = 0;
  double auto_steps = 0;
  double total_pairs = 0;
  double reduction = 0;  // 1 - manual_steps / total_pairs
};

struct WorkloadReport {
  PhaseWorkload temporal;
  PhaseWorkload coreference;
  PhaseWorkload causal;
};

nlohmann::json to_json(const PhaseWorkload& w);
nlohmann::json to_json(const WorkloadReport& w);

// Averages manual step counts over annotators (fractional averages allowed).
PhaseWorkload phase_workload(std::span<const double> manual_steps, double total_pairs,
                             double auto_steps = 0);

// Averages the per-phase stats of finished exports.
WorkloadReport workload_report(std::span<const ExportedAnnotation> exports);

enum class CausalUniverse {
  kBeforeBoth,        // cluster pairs in BEFORE order for both annotators
  kAllClusterPairs,   // every ordered pair of clusters both annotators formed
};

struct PairUniverse {
  ItemLabels labels_a;
  ItemLabels labels_b;
  std::size_t size() const { return labels_a.size(); }
};

// Aligns two exports of the same document into one labeled item universe.
// Clusters are matched across annotators by member set.
PairUniverse build_pair_universe(const ExportedAnnotation& a, const ExportedAnnotation& b,
                                 RelationKind kind,
                                 CausalUniverse causal = CausalUniverse::kBeforeBoth);

AgreementReport agreement(const ExportedAnnotation& a, const ExportedAnnotation& b, RelationKind kind,
                          CausalUniverse causal = CausalUniverse::kBeforeBoth);

struct PairwiseAgreement {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, AgreementReport>> pairs;
  double average = 0;  // mean kappa, or mean F1 for coreference
};

PairwiseAgreement pairwise_agreement(std::span<const ExportedAnnotation> exports, RelationKind kind,
                                     CausalUniverse causal = CausalUniverse::kBeforeBoth);

}  // namespace evrel
