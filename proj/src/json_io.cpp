#include "evrel/json_io.hpp"

#include "evrel/error.hpp"

namespace evrel {

using nlohmann::json;

json to_json(const PairKey& key) { return {{"a", key.first}, {"b", key.second}}; }

json to_json(const CellState& cell) {
  json j = {{"provenance", std::string(to_string(cell.provenance))}};
  if (cell.annotated()) j["label"] = std::string(to_string(cell.label));
  if (cell.provenance == Provenance::kInferred) j["witness"] = cell.witness;
  return j;
}

json to_json(const ConflictWitness& w) {
  json j = {{"kind", w.kind == ConflictKind::kDirectContradiction ? "direct_contradiction"
                                                                  : "path_disagreement"},
            {"pair", to_json(w.pair)},
            {"mediator", w.mediator},
            {"composed_label", std::string(to_string(w.composed_label))},
            {"legs",
             {{{"label", std::string(to_string(w.leg_ik))}, {"state", to_json(w.leg_ik_state)}},
              {{"label", std::string(to_string(w.leg_kj))}, {"state", to_json(w.leg_kj_state)}}}},
            {"path", w.path}};
  if (w.direct_label) j["direct_label"] = std::string(to_string(*w.direct_label));
  if (!w.rival_labels.empty()) {
    json rivals = json::array();
    for (auto r : w.rival_labels) rivals.push_back(std::string(to_string(r)));
    j["rival_labels"] = std::move(rivals);
  }
  return j;
}

json to_json(const std::vector<ConflictWitness>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(to_json(w));
  return out;
}

json to_json(const CompletionStatus& s) {
  return {{"resolved_pairs", s.resolved_pairs}, {"direct_pairs", s.direct_pairs},
          {"inferred_pairs", s.inferred_pairs}, {"unannotated_pairs", s.unannotated_pairs},
          {"conflicts", s.conflicts},           {"complete", s.complete}};
}

json to_json(const RelationMatrix& m) {
  json cells = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      json c = to_json(m.cell(i, j));
      c["a"] = m.mention_ids()[i];
      c["b"] = m.mention_ids()[j];
      cells.push_back(std::move(c));
    }
  }
  return {{"mentions", m.mention_ids()}, {"cells", std::move(cells)}};
}

json to_json(const CorefPartition& p) {
  json clusters = json::array();
  for (const auto& c : p.clusters()) clusters.push_back({{"id", c.id()}, {"members", c.members}});
  return {{"clusters", std::move(clusters)}, {"handled", p.handled()}};
}

json to_json(const CausalState& s) {
  json links = json::array();
  for (const auto& l : s.links) links.push_back({{"cause", l.cause}, {"effect", l.effect}});
  return {{"links", std::move(links)}, {"handled", s.handled}};
}

json to_json(const MembershipConflict& c) {
  return {{"mention", c.mention}, {"current_cluster", c.current_cluster}};
}

TemporalLabel label_from_json(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_string()) {
    throw Error(ErrorCode::kValidation, std::string("missing label field '") + field + "'");
  }
  auto label = parse_label(j[field].get<std::string>());
  if (!label) {
    throw Error(ErrorCode::kValidation, "unknown temporal label: " + j[field].get<std::string>());
  }
  return *label;
}

}  // namespace evrel
