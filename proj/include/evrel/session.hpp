#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evrel/causal.hpp"
#include "evrel/coref.hpp"
#include "evrel/document.hpp"
#include "evrel/temporal.hpp"

namespace evrel {

enum class TaskPhase { kSelection, kTemporal, kCoreference, kCausal, kDone };

std::string_view to_string(TaskPhase phase);
std::optional<TaskPhase> parse_phase(std::string_view text);

enum class ActionKind {
  kSetStatus,
  kAnnotateTemporal,  // direct label on a pair that had none
  kRevise,            // direct label replaced by a different one
  kFormCluster,
  kRecordCauses,
  kAdvance,
  kNavigateBack,
};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view text);

struct ActionRecord {
  std::uint64_t seq = 0;
  TaskPhase phase = TaskPhase::kSelection;  // phase the action was taken in
  ActionKind kind = ActionKind::kAdvance;
  nlohmann::json payload = nlohmann::json::object();
  std::int64_t timestamp_ms = 0;  // wall clock, never read by the engines
};

// Downstream items dropped because an upstream revision broke their
// preconditions; they are re-queued for the annotator.
struct InvalidatedItem {
  std::string kind;  // "cluster" or "causal_link"
  nlohmann::json detail;
};

struct TemporalResult {
  AnnotationDelta delta;
  bool recorded = false;  // false when the pair already held this direct label
};

struct CorefResult {
  std::vector<MembershipConflict> conflicts;
  bool applied = false;
};

// What the annotator should look at next in the current phase.
struct NextUnit {
  TaskPhase phase = TaskPhase::kSelection;
  bool phase_complete = false;
  std::optional<PairKey> pair;             // temporal
  std::optional<std::string> focal;        // coreference: mention; causal: cluster
  std::vector<std::string> candidates;     // mentions (coref) or clusters (causal)
  std::vector<std::string> pending;        // selection: mentions still candidate
};

struct PhaseSteps {
  std::size_t manual_steps = 0;
  std::size_t auto_steps = 0;
  std::size_t pairs_presented = 0;
};

class AnnotationSession {
 public:
  using Clock = std::function<std::int64_t()>;

  static AnnotationSession start(Document doc, std::string annotator_id,
                                 std::string session_id = "session");

  const std::string& session_id() const { return session_id_; }
  const std::string& annotator_id() const { return annotator_id_; }
  const Document& document() const { return doc_; }
  const RelationMatrix& matrix() const { return matrix_; }
  const CorefPartition& partition() const { return partition_; }
  const CausalState& causal() const { return causal_; }
  TaskPhase phase() const { return phase_; }
  const std::vector<ActionRecord>& log() const { return log_; }
  const std::vector<InvalidatedItem>& invalidated() const { return invalidated_; }

  void set_clock(Clock clock) { clock_ = std::move(clock); }

  void set_mention_status(std::string_view mention, MentionStatus status);
  TemporalResult annotate_temporal(std::string_view a, std::string_view b, TemporalLabel label);
  CorefResult form_cluster(std::string_view focal, const std::vector<std::string>& members,
                           bool confirm = false);
  void record_causes(std::string_view focal_cluster, const std::vector<std::string>& causes);
  void advance();
  void go_back();

  NextUnit next_unit() const;
  // Items preventing advance_phase from the current phase; empty when it may advance.
  std::vector<std::string> blocking_items() const;

  PhaseSteps steps(TaskPhase phase) const;

  nlohmann::json export_annotation() const;
  std::string save() const;
  static AnnotationSession load(std::string_view bytes);

  // Engine state without timestamps; equal for sessions that replay alike.
  nlohmann::json state_json() const;

 private:
  AnnotationSession() = default;

  void require_phase(TaskPhase phase, const char* action) const;
  void record(ActionKind kind, nlohmann::json payload, std::optional<TaskPhase> taken_in = {});
  void apply(const ActionRecord& record);
  void rebuild_matrix();
  void repair_coreference();
  void repair_causal();
  std::vector<std::string> overall_gaps() const;

  std::string session_id_;
  std::string annotator_id_;
  Document doc_;
  Document delivered_;  // as passed to start(); saved sessions replay from it
  std::map<PairKey, TemporalLabel> direct_;  // survives selection changes
  RelationMatrix matrix_;
  CorefPartition partition_;
  CausalState causal_;
  TaskPhase phase_ = TaskPhase::kSelection;
  std::vector<ActionRecord> log_;
  std::vector<InvalidatedItem> invalidated_;
  std::size_t coref_presented_ = 0;
  std::size_t causal_presented_ = 0;
  Clock clock_;
  const ActionRecord* replaying_ = nullptr;
};

inline constexpr int kSessionFormatVersion = 1;

}  // namespace evrel
