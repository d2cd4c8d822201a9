#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evrel/document.hpp"
#include "evrel/labels.hpp"
#include "evrel/metrics.hpp"

namespace evrel {

enum class TruthPolicy { kChronological, kRandomTimeline, kFromFile };

std::optional<TruthPolicy> parse_truth_policy(std::string_view text);

// Hidden timeline an oracle annotator answers from. Mention i of the
// synthetic document is index i here.
struct GroundTruth {
  std::vector<long long> start_times;
  std::set<std::pair<std::size_t, std::size_t>> vague;  // i < j
  std::vector<std::size_t> event_of;                    // coreference: same id = same event
  std::set<std::pair<std::size_t, std::size_t>> causes; // (cause event, effect event)

  std::size_t size() const { return start_times.size(); }
  TemporalLabel label(std::size_t a, std::size_t b) const;

  static GroundTruth from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SimulationConfig {
  std::size_t n_events = 4;
  TruthPolicy policy = TruthPolicy::kChronological;
  std::uint64_t seed = 1;
  double tie_probability = 0.15;    // random timeline: share an earlier start time
  double vague_probability = 0.1;   // random timeline: per-pair VAGUE mask
  double coref_probability = 0.5;   // tied mentions that refer to the same event
  double cause_probability = 0.2;   // BEFORE event pairs linked causally
  std::optional<GroundTruth> truth; // kFromFile
};

// Deterministic for a given config. Random timelines keep only VAGUE pairs
// that no chain of definite pairs contradicts, so an oracle never conflicts.
GroundTruth make_ground_truth(const SimulationConfig& config);

// Document "e1 e2 ... eN" with one included mention per token.
Document synthetic_document(std::size_t n, const std::string& doc_id = "sim");

struct SimulationResult {
  WorkloadReport workload;
  std::vector<PairKey> presented;      // temporal pairs in presentation order
  std::size_t max_conflicts = 0;       // largest conflict list seen after any answer
  bool complete = false;
  std::size_t coref_universe = 0;      // EQUAL mention pairs
  std::size_t causal_universe = 0;     // BEFORE cluster pairs
  std::size_t clusters = 0;
  nlohmann::json export_document;
  std::string saved_session;          // save() of the finished session

  nlohmann::json to_json() const;
};

SimulationResult run_simulation(const SimulationConfig& config);
SimulationResult run_simulation(const GroundTruth& truth);

}  // namespace evrel
