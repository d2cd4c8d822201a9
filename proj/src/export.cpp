#include "evrel/export.hpp"

#include <algorithm>

#include "evrel/error.hpp"
#include "evrel/temporal.hpp"

namespace evrel {

using nlohmann::json;

std::string ExportedAnnotation::cluster_of(const std::string& mention) const {
  for (const auto& c : clusters) {
    if (std::find(c.begin(), c.end(), mention) != c.end()) return c.front();
  }
  return {};
}

std::optional<TemporalLabel> ExportedAnnotation::label(const std::string& a, const std::string& b) const {
  if (auto it = mention_labels.find({a, b}); it != mention_labels.end()) return it->second;
  if (auto it = mention_labels.find({b, a}); it != mention_labels.end()) return invert(it->second);
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, "invalid export: " + what);
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(ErrorCode::kFormat, std::string("missing field '") + name + "'");
  return j[name];
}

std::string str(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) fail(ErrorCode::kFormat, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

TemporalLabel label_of(const json& j) {
  auto label = parse_label(str(j, "label"));
  if (!label) fail(ErrorCode::kFormat, "unknown label " + str(j, "label"));
  return *label;
}

}  // namespace

namespace {

ExportedAnnotation validate_impl(const json& j) {
  ExportedAnnotation out;
  out.doc_id = str(j, "doc_id");
  out.annotator_id = j.value("annotator_id", "");
  for (const auto& m : field(j, "mentions")) out.mentions.push_back(str(m, "id"));
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < out.mentions.size(); ++i) {
    if (!position.emplace(out.mentions[i], i).second) fail(ErrorCode::kIntegrity, "duplicate mention " + out.mentions[i]);
  }

  std::set<std::string> covered;
  for (const auto& c : field(j, "clusters")) {
    std::vector<std::string> members = c.get<std::vector<std::string>>();
    if (members.empty()) fail(ErrorCode::kIntegrity, "empty cluster");
    for (const auto& m : members) {
      if (!position.count(m)) fail(ErrorCode::kIntegrity, "cluster member " + m + " is not an exported mention");
      if (!covered.insert(m).second) fail(ErrorCode::kIntegrity, "mention " + m + " is in two clusters");
    }
    if (!std::is_sorted(members.begin(), members.end(),
                        [&](const auto& a, const auto& b) { return position[a] < position[b]; })) {
      fail(ErrorCode::kIntegrity, "cluster members are not in text order");
    }
    out.clusters.push_back(std::move(members));
  }
  if (covered.size() != out.mentions.size()) fail(ErrorCode::kIntegrity, "clusters do not cover every mention");

  for (const auto& t : field(j, "mention_temporal")) {
    std::string a = str(t, "a"), b = str(t, "b");
    if (!position.count(a) || !position.count(b) || position[a] >= position[b]) {
      fail(ErrorCode::kIntegrity, "mention pair " + a + "/" + b + " is not canonical");
    }
    if (!out.mention_labels.emplace(PairKey{a, b}, label_of(t)).second) {
      fail(ErrorCode::kIntegrity, "mention pair " + a + "/" + b + " listed twice");
    }
  }
  const std::size_t n = out.mentions.size();
  if (out.mention_labels.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
    fail(ErrorCode::kIntegrity, "temporal annotation is incomplete");
  }

  RelationMatrix m(out.mentions);
  for (const auto& [key, label] : out.mention_labels) {
    m.set_direct(position[key.first], position[key.second], label);
  }
  m.recompute_closure();
  if (auto conflicts = m.detect_conflicts(); !conflicts.empty()) {
    fail(ErrorCode::kIntegrity, "temporal labels conflict on " + conflicts.front().pair.first + "/" +
                                    conflicts.front().pair.second);
  }

  for (const auto& c : out.clusters) {
    for (std::size_t x = 0; x < c.size(); ++x) {
      for (std::size_t y = x + 1; y < c.size(); ++y) {
        if (out.label(c[x], c[y]) != TemporalLabel::kEqual) {
          fail(ErrorCode::kIntegrity, "cluster members " + c[x] + " and " + c[y] + " do not co-occur");
        }
      }
    }
  }

  for (const auto& t : field(j, "temporal")) {
    std::string a = str(t, "a"), b = str(t, "b");
    const TemporalLabel label = label_of(t);
    const auto ca = std::find_if(out.clusters.begin(), out.clusters.end(), [&](const auto& c) { return c.front() == a; });
    const auto cb = std::find_if(out.clusters.begin(), out.clusters.end(), [&](const auto& c) { return c.front() == b; });
    if (ca == out.clusters.end() || cb == out.clusters.end() || ca == cb) {
      fail(ErrorCode::kIntegrity, "temporal entry references unknown cluster " + a + "/" + b);
    }
    for (const auto& x : *ca) {
      for (const auto& y : *cb) {
        if (out.label(x, y) != label) fail(ErrorCode::kIntegrity, "cluster relation " + a + "/" + b + " is not uniform");
      }
    }
    out.cluster_labels[{a, b}] = label;
  }
  const std::size_t k = out.clusters.size();
  if (out.cluster_labels.size() != k * (k - (k > 0 ? 1 : 0)) / 2) {
    fail(ErrorCode::kIntegrity, "cluster-level temporal relations are incomplete");
  }

  for (const auto& l : field(j, "causal")) {
    CausalLink link{str(l, "cause"), str(l, "effect")};
    auto forward = out.cluster_labels.find({link.cause, link.effect});
    auto backward = out.cluster_labels.find({link.effect, link.cause});
    const bool before = (forward != out.cluster_labels.end() && forward->second == TemporalLabel::kBefore) ||
                        (backward != out.cluster_labels.end() && backward->second == TemporalLabel::kAfter);
    if (!before) fail(ErrorCode::kIntegrity, "cause " + link.cause + " does not precede effect " + link.effect);
    out.causal.insert(std::move(link));
  }

  out.stats = j.value("stats", json::object());
  if (out.stats.contains("temporal")) {
    const auto& t = out.stats["temporal"];
    if (t.value("manual_steps", 0) + t.value("auto_steps", 0) != out.mention_labels.size()) {
      fail(ErrorCode::kIntegrity, "temporal manual + auto steps do not cover every pair");
    }
  }
  return out;
}

}  // namespace

ExportedAnnotation validate_export(const json& j) {
  try {
    return validate_impl(j);
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, e.what());
  }
}

}  // namespace evrel
