#include "evrel/session.hpp"

#include <algorithm>
#include <chrono>

#include "evrel/error.hpp"
#include "evrel/json_io.hpp"

namespace evrel {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<TaskPhase, std::string_view>, 5> kPhaseNames = {{
    {TaskPhase::kSelection, "selection"},
    {TaskPhase::kTemporal, "temporal"},
    {TaskPhase::kCoreference, "coreference"},
    {TaskPhase::kCausal, "causal"},
    {TaskPhase::kDone, "done"},
}};

constexpr std::array<std::pair<ActionKind, std::string_view>, 7> kActionNames = {{
    {ActionKind::kSetStatus, "set-status"},
    {ActionKind::kAnnotateTemporal, "annotate-temporal"},
    {ActionKind::kRevise, "revise"},
    {ActionKind::kFormCluster, "form-cluster"},
    {ActionKind::kRecordCauses, "record-causes"},
    {ActionKind::kAdvance, "advance"},
    {ActionKind::kNavigateBack, "navigate-back"},
}};

std::int64_t wall_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string pair_text(const PairKey& k) { return k.first + "/" + k.second; }

std::vector<std::string> string_list(const json& payload, const char* field) {
  if (!payload.contains(field)) return {};
  if (!payload[field].is_array()) {
    throw Error(ErrorCode::kValidation, std::string("field '") + field + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : payload[field]) {
    if (!v.is_string()) throw Error(ErrorCode::kValidation, std::string("non-string id in '") + field + "'");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string string_field(const json& payload, const char* field) {
  if (!payload.contains(field) || !payload[field].is_string()) {
    throw Error(ErrorCode::kValidation, std::string("missing string field '") + field + "'");
  }
  return payload[field].get<std::string>();
}

}  // namespace

std::string_view to_string(TaskPhase phase) {
  for (auto [p, name] : kPhaseNames) {
    if (p == phase) return name;
  }
  return "selection";
}

std::optional<TaskPhase> parse_phase(std::string_view text) {
  for (auto [p, name] : kPhaseNames) {
    if (name == text) return p;
  }
  return std::nullopt;
}

std::string_view to_string(ActionKind kind) {
  for (auto [k, name] : kActionNames) {
    if (k == kind) return name;
  }
  return "advance";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
  for (auto [k, name] : kActionNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

AnnotationSession AnnotationSession::start(Document doc, std::string annotator_id,
                                           std::string session_id) {
  if (doc.mentions.empty()) {
    throw Error(ErrorCode::kPrecondition, "document " + doc.doc_id + " has no event mentions");
  }
  AnnotationSession s;
  s.session_id_ = std::move(session_id);
  s.annotator_id_ = std::move(annotator_id);
  s.doc_ = std::move(doc);
  s.delivered_ = s.doc_;
  const bool needs_selection = std::any_of(s.doc_.mentions.begin(), s.doc_.mentions.end(),
                                           [](const auto& m) { return m.status == MentionStatus::kCandidate; });
  s.phase_ = needs_selection ? TaskPhase::kSelection : TaskPhase::kTemporal;
  s.rebuild_matrix();
  return s;
}

void AnnotationSession::require_phase(TaskPhase phase, const char* action) const {
  if (phase_ != phase) {
    throw Error(ErrorCode::kPhase, std::string(action) + " is only allowed in the " +
                                       std::string(to_string(phase)) + " phase (current: " +
                                       std::string(to_string(phase_)) + ")");
  }
}

void AnnotationSession::record(ActionKind kind, json payload, std::optional<TaskPhase> taken_in) {
  ActionRecord r;
  r.seq = log_.empty() ? 1 : log_.back().seq + 1;
  r.phase = taken_in.value_or(phase_);
  r.kind = kind;
  r.payload = std::move(payload);
  if (replaying_ != nullptr) {
    r.seq = replaying_->seq;
    r.timestamp_ms = replaying_->timestamp_ms;
  } else {
    r.timestamp_ms = clock_ ? clock_() : wall_clock_ms();
  }
  log_.push_back(std::move(r));
}

void AnnotationSession::rebuild_matrix() {
  matrix_ = RelationMatrix(doc_.included_ids());
  for (const auto& [key, label] : direct_) {
    auto i = matrix_.index_of(key.first);
    auto j = matrix_.index_of(key.second);
    if (i && j) matrix_.set_direct(*i, *j, label);
  }
  matrix_.recompute_closure();
}

void AnnotationSession::set_mention_status(std::string_view mention, MentionStatus status) {
  require_phase(TaskPhase::kSelection, "changing mention status");
  if (status == MentionStatus::kCandidate) {
    throw Error(ErrorCode::kValidation, "status must be included or excluded");
  }
  EventMention* m = doc_.find(mention);
  if (m == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown mention " + std::string(mention), {std::string(mention)});
  }
  m->status = status;
  rebuild_matrix();
  record(ActionKind::kSetStatus, {{"mention", m->id}, {"status", std::string(to_string(status))}});
}

TemporalResult AnnotationSession::annotate_temporal(std::string_view a, std::string_view b,
                                                    TemporalLabel label) {
  require_phase(TaskPhase::kTemporal, "temporal annotation");
  const OrientedPair op = canonical_pair(a, b, doc_);
  const TemporalLabel canonical = op.forward ? label : invert(label);
  TemporalResult result;
  auto existing = direct_.find(op.key);
  if (existing != direct_.end() && existing->second == canonical) {
    result.delta.previous = matrix_.cell(op.key);
    result.delta.conflicts = matrix_.detect_conflicts();
    return result;
  }
  const ActionKind kind = existing == direct_.end() ? ActionKind::kAnnotateTemporal : ActionKind::kRevise;
  direct_[op.key] = canonical;
  result.delta = matrix_.apply_annotation(op.key.first, op.key.second, canonical);
  result.recorded = true;
  record(kind, {{"a", op.key.first}, {"b", op.key.second}, {"label", std::string(to_string(canonical))}});
  return result;
}

CorefResult AnnotationSession::form_cluster(std::string_view focal,
                                            const std::vector<std::string>& members, bool confirm) {
  require_phase(TaskPhase::kCoreference, "cluster formation");
  const std::size_t presented = equal_candidates(matrix_, focal).size();
  auto result = evrel::form_cluster(partition_, matrix_, focal, members, confirm);
  CorefResult out{result.conflicts, result.applied};
  if (!result.applied) return out;
  partition_ = std::move(result.partition);
  coref_presented_ += presented;
  std::vector<std::string> sorted = members;
  std::sort(sorted.begin(), sorted.end(),
            [&](const auto& x, const auto& y) { return matrix_.require_index(x) < matrix_.require_index(y); });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  record(ActionKind::kFormCluster, {{"focal", std::string(focal)}, {"members", sorted}, {"confirm", confirm}});
  return out;
}

void AnnotationSession::record_causes(std::string_view focal_cluster,
                                      const std::vector<std::string>& causes) {
  require_phase(TaskPhase::kCausal, "causal annotation");
  const std::size_t presented = preceding_candidates(partition_, matrix_, focal_cluster).size();
  causal_ = evrel::record_causes(causal_, partition_, matrix_, focal_cluster, causes);
  causal_presented_ += presented;
  std::vector<std::string> sorted = causes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  record(ActionKind::kRecordCauses, {{"focal", std::string(focal_cluster)}, {"causes", sorted}});
}

void AnnotationSession::repair_coreference() {
  for (const auto& id : invalid_clusters(partition_, matrix_)) {
    const Cluster* c = partition_.find(id);
    if (c->members.size() > 1) {
      invalidated_.push_back({"cluster", {{"members", c->members}}});
    }
    for (const auto& member : c->members) partition_.unmark_handled(member);
    partition_.dissolve(id);
  }
  partition_.sort_clusters(matrix_);
}

void AnnotationSession::repair_causal() {
  for (const auto& link : invalid_links(causal_, partition_, matrix_)) {
    invalidated_.push_back({"causal_link", {{"cause", link.cause}, {"effect", link.effect}}});
    causal_.links.erase(link);
    causal_.handled.erase(link.effect);
  }
  std::erase_if(causal_.handled, [&](const std::string& id) { return partition_.find(id) == nullptr; });
}

std::vector<std::string> AnnotationSession::overall_gaps() const {
  std::vector<std::string> gaps;
  const auto status = matrix_.completion_status();
  if (!status.complete) {
    gaps.push_back("temporal: " + std::to_string(status.unannotated_pairs) + " unannotated pairs, " +
                   std::to_string(status.conflicts) + " conflicts");
  }
  for (const auto& id : matrix_.mention_ids()) {
    if (partition_.cluster_of(id) == nullptr) gaps.push_back("coreference: mention " + id + " has no cluster");
  }
  return gaps;
}

std::vector<std::string> AnnotationSession::blocking_items() const {
  std::vector<std::string> items;
  switch (phase_) {
    case TaskPhase::kSelection:
      for (const auto& m : doc_.mentions) {
        if (m.status == MentionStatus::kCandidate) items.push_back("unclassified mention " + m.id);
      }
      break;
    case TaskPhase::kTemporal:
      for (std::size_t i = 0; i < matrix_.size(); ++i) {
        for (std::size_t j = i + 1; j < matrix_.size(); ++j) {
          if (!matrix_.cell(i, j).annotated()) items.push_back("unannotated pair " + pair_text(matrix_.key(i, j)));
        }
      }
      for (const auto& w : matrix_.detect_conflicts()) {
        items.push_back("conflict on " + pair_text(w.pair) + " via " + w.mediator);
      }
      break;
    case TaskPhase::kCoreference:
      for (const auto& id : matrix_.mention_ids()) {
        if (!partition_.is_handled(id) && !equal_candidates(matrix_, id).empty()) {
          items.push_back("unhandled coreference focal " + id);
        }
      }
      break;
    case TaskPhase::kCausal:
      for (const auto& c : partition_.clusters()) {
        if (!causal_.handled.count(c.id()) && !preceding_candidates(partition_, matrix_, c.id()).empty()) {
          items.push_back("unhandled causal focal " + c.id());
        }
      }
      for (auto& gap : overall_gaps()) items.push_back(std::move(gap));
      break;
    case TaskPhase::kDone:
      break;
  }
  return items;
}

void AnnotationSession::advance() {
  if (phase_ == TaskPhase::kDone) throw Error(ErrorCode::kPhase, "session is already done");
  auto blocking = blocking_items();
  if (!blocking.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "cannot leave the " + std::string(to_string(phase_)) + " phase: " +
                    std::to_string(blocking.size()) + " blocking items",
                std::move(blocking));
  }
  const TaskPhase from = phase_;
  switch (phase_) {
    case TaskPhase::kSelection:
      phase_ = TaskPhase::kTemporal;
      break;
    case TaskPhase::kTemporal:
      repair_coreference();
      phase_ = TaskPhase::kCoreference;
      break;
    case TaskPhase::kCoreference:
      partition_ = finalize_singletons(partition_, matrix_);
      repair_causal();
      phase_ = TaskPhase::kCausal;
      break;
    case TaskPhase::kCausal:
      phase_ = TaskPhase::kDone;
      break;
    case TaskPhase::kDone:
      break;
  }
  record(ActionKind::kAdvance, {{"to", std::string(to_string(phase_))}}, from);
}

void AnnotationSession::go_back() {
  if (phase_ == TaskPhase::kSelection) throw Error(ErrorCode::kPhase, "already at the first phase");
  const auto previous = static_cast<TaskPhase>(static_cast<int>(phase_) - 1);
  record(ActionKind::kNavigateBack, {{"to", std::string(to_string(previous))}});
  phase_ = previous;
}

NextUnit AnnotationSession::next_unit() const {
  NextUnit unit;
  unit.phase = phase_;
  switch (phase_) {
    case TaskPhase::kSelection:
      for (const auto& m : doc_.mentions) {
        if (m.status == MentionStatus::kCandidate) unit.pending.push_back(m.id);
      }
      unit.phase_complete = unit.pending.empty();
      break;
    case TaskPhase::kTemporal:
      if (auto next = matrix_.next_pair()) {
        unit.pair = matrix_.key(next->first, next->second);
      } else {
        auto conflicts = matrix_.detect_conflicts();
        if (conflicts.empty()) {
          unit.phase_complete = true;
        } else {
          unit.pair = conflicts.front().pair;
        }
      }
      break;
    case TaskPhase::kCoreference:
      if (auto focal = next_unhandled_coref(partition_, matrix_)) {
        unit.focal = *focal;
        unit.candidates = equal_candidates(matrix_, *focal);
      } else {
        unit.phase_complete = true;
      }
      break;
    case TaskPhase::kCausal:
      if (auto focal = next_unhandled_causal(causal_, partition_, matrix_)) {
        unit.focal = *focal;
        unit.candidates = preceding_candidates(partition_, matrix_, *focal);
      } else {
        unit.phase_complete = true;
      }
      break;
    case TaskPhase::kDone:
      unit.phase_complete = true;
      break;
  }
  return unit;
}

PhaseSteps AnnotationSession::steps(TaskPhase phase) const {
  PhaseSteps s;
  auto count = [&](ActionKind kind) {
    return static_cast<std::size_t>(
        std::count_if(log_.begin(), log_.end(), [&](const auto& r) { return r.kind == kind; }));
  };
  switch (phase) {
    case TaskPhase::kTemporal:
      // one step per directly judged pair; revising a pair does not add one
      s.manual_steps = matrix_.completion_status().direct_pairs;
      s.auto_steps = matrix_.completion_status().inferred_pairs;
      s.pairs_presented = count(ActionKind::kAnnotateTemporal) + count(ActionKind::kRevise);
      break;
    case TaskPhase::kCoreference:
      s.manual_steps = count(ActionKind::kFormCluster);
      s.pairs_presented = coref_presented_;
      break;
    case TaskPhase::kCausal:
      s.manual_steps = count(ActionKind::kRecordCauses);
      s.pairs_presented = causal_presented_;
      break;
    default:
      break;
  }
  return s;
}

json AnnotationSession::export_annotation() const {
  if (phase_ != TaskPhase::kDone) {
    throw Error(ErrorCode::kPhase, "export is only available once the session is done");
  }
  json mentions = json::array();
  for (const auto& m : doc_.mentions) {
    if (m.status != MentionStatus::kIncluded) continue;
    mentions.push_back({{"id", m.id}, {"start", m.start}, {"end", m.end}, {"surface", m.surface}});
  }
  json clusters = json::array();
  for (const auto& c : partition_.clusters()) clusters.push_back(c.members);

  json temporal = json::array();
  const auto& cs = partition_.clusters();
  for (std::size_t x = 0; x < cs.size(); ++x) {
    for (std::size_t y = x + 1; y < cs.size(); ++y) {
      bool direct = false;
      for (const auto& u : cs[x].members) {
        for (const auto& v : cs[y].members) {
          const auto key = canonical_pair(u, v, doc_).key;
          direct = direct || matrix_.cell(key).provenance == Provenance::kDirect;
        }
      }
      temporal.push_back({{"a", cs[x].id()},
                          {"b", cs[y].id()},
                          {"label", std::string(to_string(cluster_relation(matrix_, cs[x], cs[y])))},
                          {"provenance", direct ? "direct" : "inferred"}});
    }
  }
  json mention_temporal = json::array();
  for (std::size_t i = 0; i < matrix_.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix_.size(); ++j) {
      const auto& cell = matrix_.cell(i, j);
      mention_temporal.push_back({{"a", matrix_.mention_ids()[i]},
                                  {"b", matrix_.mention_ids()[j]},
                                  {"label", std::string(to_string(cell.label))},
                                  {"provenance", std::string(to_string(cell.provenance))}});
    }
  }
  json causal = json::array();
  for (const auto& l : causal_.links) causal.push_back({{"cause", l.cause}, {"effect", l.effect}});

  json stats = json::object();
  for (auto phase : {TaskPhase::kTemporal, TaskPhase::kCoreference, TaskPhase::kCausal}) {
    const auto s = steps(phase);
    stats[std::string(to_string(phase))] = {{"manual_steps", s.manual_steps},
                                            {"auto_steps", s.auto_steps},
                                            {"pairs_presented", s.pairs_presented},
                                            {"total_pairs", matrix_.pair_count()}};
  }
  return {{"format", "evrel-export"},
          {"format_version", 1},
          {"doc_id", doc_.doc_id},
          {"annotator_id", annotator_id_},
          {"mentions", std::move(mentions)},
          {"clusters", std::move(clusters)},
          {"temporal", std::move(temporal)},
          {"mention_temporal", std::move(mention_temporal)},
          {"causal", std::move(causal)},
          {"stats", std::move(stats)}};
}

std::string AnnotationSession::save() const {
  json log = json::array();
  for (const auto& r : log_) {
    log.push_back({{"seq", r.seq},
                   {"phase", std::string(to_string(r.phase))},
                   {"kind", std::string(to_string(r.kind))},
                   {"payload", r.payload},
                   {"timestamp_ms", r.timestamp_ms}});
  }
  json j = {{"format", "evrel-session"},
            {"format_version", kSessionFormatVersion},
            {"session_id", session_id_},
            {"annotator_id", annotator_id_},
            {"document", document_to_json(delivered_)},
            {"log", std::move(log)}};
  return j.dump();
}

void AnnotationSession::apply(const ActionRecord& r) {
  if (r.phase != phase_) {
    throw Error(ErrorCode::kFormat, "log record " + std::to_string(r.seq) + " was taken in phase " +
                                        std::string(to_string(r.phase)) + " but replay is in " +
                                        std::string(to_string(phase_)));
  }
  replaying_ = &r;
  struct Reset {
    const ActionRecord*& p;
    ~Reset() { p = nullptr; }
  } reset{replaying_};
  const json& p = r.payload;
  switch (r.kind) {
    case ActionKind::kSetStatus: {
      auto status = parse_status(string_field(p, "status"));
      if (!status) throw Error(ErrorCode::kFormat, "bad status in log");
      set_mention_status(string_field(p, "mention"), *status);
      break;
    }
    case ActionKind::kAnnotateTemporal:
    case ActionKind::kRevise: {
      auto result = annotate_temporal(string_field(p, "a"), string_field(p, "b"), label_from_json(p, "label"));
      if (!result.recorded || log_.back().kind != r.kind) {
        throw Error(ErrorCode::kFormat, "log record " + std::to_string(r.seq) + " does not replay");
      }
      break;
    }
    case ActionKind::kFormCluster: {
      auto result = form_cluster(string_field(p, "focal"), string_list(p, "members"), p.value("confirm", false));
      if (!result.applied) throw Error(ErrorCode::kFormat, "cluster record does not replay");
      break;
    }
    case ActionKind::kRecordCauses:
      record_causes(string_field(p, "focal"), string_list(p, "causes"));
      break;
    case ActionKind::kAdvance:
      advance();
      break;
    case ActionKind::kNavigateBack:
      go_back();
      break;
  }
}

AnnotationSession AnnotationSession::load(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("corrupted session payload: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "evrel-session") {
    throw Error(ErrorCode::kFormat, "not a saved annotation session");
  }
  if (!j.contains("format_version") || j["format_version"] != kSessionFormatVersion) {
    throw Error(ErrorCode::kFormat, "session format version mismatch");
  }
  try {
    auto s = start(document_from_json(j.at("document")), j.at("annotator_id").get<std::string>(),
                   j.at("session_id").get<std::string>());
    std::uint64_t last_seq = 0;
    for (const auto& raw : j.at("log")) {
      ActionRecord r;
      r.seq = raw.at("seq").get<std::uint64_t>();
      if (r.seq <= last_seq) throw Error(ErrorCode::kFormat, "log sequence is not increasing");
      last_seq = r.seq;
      auto phase = parse_phase(raw.at("phase").get<std::string>());
      auto kind = parse_action_kind(raw.at("kind").get<std::string>());
      if (!phase || !kind) throw Error(ErrorCode::kFormat, "bad log record " + std::to_string(r.seq));
      r.phase = *phase;
      r.kind = *kind;
      r.payload = raw.at("payload");
      r.timestamp_ms = raw.at("timestamp_ms").get<std::int64_t>();
      s.apply(r);
    }
    return s;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFormat) throw;
    throw Error(ErrorCode::kFormat, std::string("session log does not replay: ") + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("corrupted session payload: ") + e.what());
  }
}

json AnnotationSession::state_json() const {
  json statuses = json::object();
  for (const auto& m : doc_.mentions) statuses[m.id] = std::string(to_string(m.status));
  json invalidated = json::array();
  for (const auto& item : invalidated_) invalidated.push_back({{"kind", item.kind}, {"detail", item.detail}});
  json j = {{"phase", std::string(to_string(phase_))},
            {"statuses", std::move(statuses)},
            {"matrix", to_json(matrix_)},
            {"partition", to_json(partition_)},
            {"causal", to_json(causal_)},
            {"invalidated", std::move(invalidated)},
            {"log_size", log_.size()}};
  for (auto phase : {TaskPhase::kTemporal, TaskPhase::kCoreference, TaskPhase::kCausal}) {
    const auto st = steps(phase);
    j["steps"][std::string(to_string(phase))] = {
        {"manual_steps", st.manual_steps}, {"auto_steps", st.auto_steps}, {"pairs_presented", st.pairs_presented}};
  }
  return j;
}

}  // namespace evrel
