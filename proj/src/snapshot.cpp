#include "evrel/snapshot.hpp"

#include <algorithm>

#include "evrel/json_io.hpp"

namespace evrel {

using nlohmann::json;

json to_json(const NextUnit& unit) {
  json j = {{"phase", std::string(to_string(unit.phase))}, {"phase_complete", unit.phase_complete}};
  if (unit.pair) j["pair"] = to_json(*unit.pair);
  if (unit.focal) {
    j["focal"] = *unit.focal;
    j["candidates"] = unit.candidates;
  }
  if (unit.phase == TaskPhase::kSelection) j["pending"] = unit.pending;
  return j;
}

json session_snapshot(const AnnotationSession& s) {
  const auto& m = s.matrix();
  const bool cluster_view = s.phase() == TaskPhase::kCausal || s.phase() == TaskPhase::kDone;

  json nodes = json::array();
  json edges = json::array();
  if (cluster_view) {
    const auto& clusters = s.partition().clusters();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const auto* mention = s.document().find(clusters[c].representative());
      nodes.push_back({{"id", clusters[c].id()},
                       {"label", mention ? mention->surface : clusters[c].id()},
                       {"order_index", c},
                       {"members", clusters[c].members}});
    }
    for (const auto& link : s.causal().links) {
      edges.push_back({{"a", link.cause}, {"b", link.effect}, {"label", "CAUSE"}, {"provenance", "direct"}});
    }
    for (std::size_t x = 0; x < clusters.size(); ++x) {
      for (std::size_t y = x + 1; y < clusters.size(); ++y) {
        auto label = m.label(clusters[x].representative(), clusters[y].representative());
        if (!label) continue;
        bool direct = false;
        for (const auto& u : clusters[x].members) {
          for (const auto& v : clusters[y].members) {
            const std::size_t i = m.require_index(u), j = m.require_index(v);
            direct = direct || m.cell(std::min(i, j), std::max(i, j)).provenance == Provenance::kDirect;
          }
        }
        edges.push_back({{"a", clusters[x].id()},
                         {"b", clusters[y].id()},
                         {"label", std::string(to_string(*label))},
                         {"provenance", direct ? "direct" : "inferred"}});
      }
    }
  } else {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto* mention = s.document().find(m.mention_ids()[i]);
      nodes.push_back({{"id", mention->id}, {"label", mention->surface}, {"order_index", i}});
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        const auto& cell = m.cell(i, j);
        if (!cell.annotated()) continue;
        json e = to_json(cell);
        e["a"] = m.mention_ids()[i];
        e["b"] = m.mention_ids()[j];
        edges.push_back(std::move(e));
      }
    }
  }

  json progress = {{"temporal", to_json(m.completion_status())}};
  for (auto phase : {TaskPhase::kTemporal, TaskPhase::kCoreference, TaskPhase::kCausal}) {
    const auto st = s.steps(phase);
    progress["steps"][std::string(to_string(phase))] = {
        {"manual_steps", st.manual_steps}, {"auto_steps", st.auto_steps}, {"pairs_presented", st.pairs_presented}};
  }
  json invalidated = json::array();
  for (const auto& item : s.invalidated()) invalidated.push_back({{"kind", item.kind}, {"detail", item.detail}});

  return {{"session_id", s.session_id()},
          {"annotator_id", s.annotator_id()},
          {"doc_id", s.document().doc_id},
          {"phase", std::string(to_string(s.phase()))},
          {"progress", std::move(progress)},
          {"current", to_json(s.next_unit())},
          {"graph", {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}},
          {"clusters", to_json(s.partition())},
          {"conflicts", to_json(m.detect_conflicts())},
          {"invalidated", std::move(invalidated)},
          {"blocking", s.blocking_items()}};
}

}  // namespace evrel
