#include "evrel/simulate.hpp"

#include <algorithm>
#include <random>

#include "evrel/error.hpp"
#include "evrel/session.hpp"

namespace evrel {

using nlohmann::json;

std::optional<TruthPolicy> parse_truth_policy(std::string_view text) {
  if (text == "chronological") return TruthPolicy::kChronological;
  if (text == "random" || text == "random-timeline") return TruthPolicy::kRandomTimeline;
  if (text == "file") return TruthPolicy::kFromFile;
  return std::nullopt;
}

TemporalLabel GroundTruth::label(std::size_t a, std::size_t b) const {
  if (vague.count({std::min(a, b), std::max(a, b)})) return TemporalLabel::kVague;
  if (start_times[a] < start_times[b]) return TemporalLabel::kBefore;
  if (start_times[a] > start_times[b]) return TemporalLabel::kAfter;
  return TemporalLabel::kEqual;
}

GroundTruth GroundTruth::from_json(const json& j) {
  GroundTruth t;
  try {
    t.start_times = j.at("start_times").get<std::vector<long long>>();
    const std::size_t n = t.start_times.size();
    for (const auto& p : j.value("vague", json::array())) {
      auto a = p.at(0).get<std::size_t>(), b = p.at(1).get<std::size_t>();
      if (a == b || a >= n || b >= n) throw Error(ErrorCode::kValidation, "vague pair out of range");
      t.vague.insert({std::min(a, b), std::max(a, b)});
    }
    if (j.contains("events")) {
      t.event_of = j["events"].get<std::vector<std::size_t>>();
    } else {
      for (std::size_t i = 0; i < n; ++i) t.event_of.push_back(i);
    }
    if (t.event_of.size() != n) throw Error(ErrorCode::kValidation, "events must list one id per mention");
    for (const auto& p : j.value("causes", json::array())) {
      t.causes.insert({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("bad ground truth file: ") + e.what());
  }
  for (std::size_t a = 0; a < t.size(); ++a) {
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      if (t.event_of[a] == t.event_of[b] && t.label(a, b) != TemporalLabel::kEqual) {
        throw Error(ErrorCode::kValidation, "coreferring mentions must share a start time and not be vague");
      }
    }
  }
  return t;
}

json GroundTruth::to_json() const {
  json vague_list = json::array();
  for (auto [a, b] : vague) vague_list.push_back({a, b});
  json cause_list = json::array();
  for (auto [a, b] : causes) cause_list.push_back({a, b});
  return {{"start_times", start_times}, {"vague", vague_list}, {"events", event_of}, {"causes", cause_list}};
}

namespace {

// True when a chain of definite pairs runs from a to b with start times
// monotone in one direction, which would force a definite label on (a, b).
bool implied_definite(const GroundTruth& t, std::size_t a, std::size_t b) {
  const std::size_t n = t.size();
  for (int direction : {1, -1}) {
    if (direction * (t.start_times[b] - t.start_times[a]) < 0) continue;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{a};
    seen[a] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (seen[v] || v == u) continue;
        if (u == a && v == b) continue;  // the pair itself
        if (t.vague.count({std::min(u, v), std::max(u, v)})) continue;
        if (direction * (t.start_times[v] - t.start_times[u]) < 0) continue;
        if (direction * (t.start_times[b] - t.start_times[v]) < 0) continue;
        if (v == b) return true;
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace

GroundTruth make_ground_truth(const SimulationConfig& config) {
  if (config.policy == TruthPolicy::kFromFile) {
    if (!config.truth) throw Error(ErrorCode::kUsage, "file policy needs a ground truth");
    return *config.truth;
  }
  const std::size_t n = config.n_events;
  GroundTruth t;
  t.start_times.resize(n);
  t.event_of.resize(n);
  if (config.policy == TruthPolicy::kChronological) {
    for (std::size_t i = 0; i < n; ++i) {
      t.start_times[i] = static_cast<long long>(i);
      t.event_of[i] = i;
    }
    return t;
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<long long> fresh_time(0, 1'000'000'000);
  std::size_t next_event = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && unit(rng) < config.tie_probability) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
      t.start_times[i] = t.start_times[j];
      t.event_of[i] = unit(rng) < config.coref_probability ? t.event_of[j] : next_event++;
    } else {
      t.start_times[i] = fresh_time(rng);
      t.event_of[i] = next_event++;
    }
  }
  // VAGUE is only masked onto pairs with distinct start times
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (t.start_times[a] != t.start_times[b] && unit(rng) < config.vague_probability) t.vague.insert({a, b});
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = t.vague.begin(); it != t.vague.end();) {
      if (implied_definite(t, it->first, it->second)) {
        it = t.vague.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  // causes between events whose mentions are in definite BEFORE order
  std::vector<std::size_t> first_mention(next_event, n);
  for (std::size_t i = 0; i < n; ++i) first_mention[t.event_of[i]] = std::min(first_mention[t.event_of[i]], i);
  for (std::size_t x = 0; x < next_event; ++x) {
    for (std::size_t y = 0; y < next_event; ++y) {
      if (x == y) continue;
      if (t.label(first_mention[x], first_mention[y]) == TemporalLabel::kBefore &&
          unit(rng) < config.cause_probability) {
        t.causes.insert({x, y});
      }
    }
  }
  return t;
}

Document synthetic_document(std::size_t n, const std::string& doc_id) {
  Document doc;
  doc.doc_id = doc_id;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "e" + std::to_string(i + 1);
    if (!doc.text.empty()) doc.text += ' ';
    EventMention m;
    m.id = id;
    m.start = doc.text.size();
    doc.text += id;
    m.end = doc.text.size();
    m.surface = id;
    m.status = MentionStatus::kIncluded;
    doc.mentions.push_back(std::move(m));
  }
  doc.text += '.';
  normalize_document(doc);
  return doc;
}

json SimulationResult::to_json() const {
  json presented_pairs = json::array();
  for (const auto& p : presented) presented_pairs.push_back({p.first, p.second});
  return {{"workload", evrel::to_json(workload)},
          {"presented", presented_pairs},
          {"max_conflicts", max_conflicts},
          {"complete", complete},
          {"coref_universe", coref_universe},
          {"causal_universe", causal_universe},
          {"clusters", clusters}};
}

SimulationResult run_simulation(const SimulationConfig& config) {
  return run_simulation(make_ground_truth(config));
}

SimulationResult run_simulation(const GroundTruth& truth) {
  const std::size_t n = truth.size();
  if (n == 0) throw Error(ErrorCode::kUsage, "simulation needs at least one event");
  auto index = [](const std::string& id) { return static_cast<std::size_t>(std::stoul(id.substr(1)) - 1); };

  auto session = AnnotationSession::start(synthetic_document(n), "oracle", "simulation");
  session.set_clock([] { return std::int64_t{0}; });
  SimulationResult result;

  while (true) {
    const NextUnit unit = session.next_unit();
    if (unit.phase_complete) {
      if (session.phase() == TaskPhase::kDone) break;
      if (session.phase() == TaskPhase::kTemporal) {
        result.complete = session.matrix().completion_status().complete;
      }
      if (session.phase() == TaskPhase::kCoreference) {
        const auto& m = session.matrix();
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (m.label(i, j) == TemporalLabel::kEqual) ++result.coref_universe;
          }
        }
      }
      session.advance();
      if (session.phase() == TaskPhase::kCausal) {
        const auto& clusters = session.partition().clusters();
        result.clusters = clusters.size();
        for (const auto& c : clusters) {
          result.causal_universe += preceding_candidates(session.partition(), session.matrix(), c.id()).size();
        }
      }
      continue;
    }
    switch (unit.phase) {
      case TaskPhase::kTemporal: {
        const auto& pair = *unit.pair;
        result.presented.push_back(pair);
        auto r = session.annotate_temporal(pair.first, pair.second,
                                           truth.label(index(pair.first), index(pair.second)));
        result.max_conflicts = std::max(result.max_conflicts, r.delta.conflicts.size());
        break;
      }
      case TaskPhase::kCoreference: {
        std::vector<std::string> same_event;
        const std::size_t focal = index(*unit.focal);
        for (const auto& c : unit.candidates) {
          if (truth.event_of[index(c)] == truth.event_of[focal]) same_event.push_back(c);
        }
        auto r = session.form_cluster(*unit.focal, same_event);
        if (!r.applied) session.form_cluster(*unit.focal, same_event, true);
        break;
      }
      case TaskPhase::kCausal: {
        const Cluster* focal = session.partition().find(*unit.focal);
        std::vector<std::string> causes;
        for (const auto& c : unit.candidates) {
          if (truth.causes.count({truth.event_of[index(c)], truth.event_of[index(focal->id())]})) {
            causes.push_back(c);
          }
        }
        session.record_causes(*unit.focal, causes);
        break;
      }
      default:
        throw Error(ErrorCode::kIntegrity, "simulation reached an unexpected phase");
    }
  }

  result.export_document = session.export_annotation();
  result.saved_session = session.save();
  const ExportedAnnotation exported = validate_export(result.export_document);
  if (n >= 2) result.workload = workload_report(std::span<const ExportedAnnotation>(&exported, 1));
  return result;
}

}  // namespace evrel
