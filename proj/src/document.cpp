#include "evrel/document.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "evrel/error.hpp"

namespace evrel {

using nlohmann::json;

std::string_view to_string(MentionStatus status) {
  switch (status) {
    case MentionStatus::kCandidate: return "candidate";
    case MentionStatus::kIncluded: return "included";
    case MentionStatus::kExcluded: return "excluded";
  }
  return "candidate";
}

std::optional<MentionStatus> parse_status(std::string_view text) {
  if (text == "candidate") return MentionStatus::kCandidate;
  if (text == "included") return MentionStatus::kIncluded;
  if (text == "excluded") return MentionStatus::kExcluded;
  return std::nullopt;
}

const EventMention* Document::find(std::string_view id) const {
  for (const auto& m : mentions) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

EventMention* Document::find(std::string_view id) {
  for (auto& m : mentions) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

std::vector<std::string> Document::included_ids() const {
  std::vector<std::string> ids;
  for (const auto& m : mentions) {
    if (m.status == MentionStatus::kIncluded) ids.push_back(m.id);
  }
  return ids;
}

void normalize_document(Document& doc) {
  std::set<std::string> seen;
  for (const auto& m : doc.mentions) {
    if (m.id.empty()) throw Error(ErrorCode::kValidation, "mention with empty id");
    if (!seen.insert(m.id).second) {
      throw Error(ErrorCode::kValidation, "duplicate mention id: " + m.id, {m.id});
    }
    if (m.start >= m.end || m.end > doc.text.size()) {
      throw Error(ErrorCode::kValidation, "span out of bounds for mention " + m.id, {m.id});
    }
    if (doc.text.compare(m.start, m.end - m.start, m.surface) != 0) {
      throw Error(ErrorCode::kValidation,
                  "surface/text mismatch for mention " + m.id + ": expected \"" +
                      doc.text.substr(m.start, m.end - m.start) + "\"",
                  {m.id});
    }
  }
  for (const auto& span : doc.temporal_entities) {
    if (span.start >= span.end || span.end > doc.text.size()) {
      throw Error(ErrorCode::kValidation, "temporal entity span out of bounds");
    }
  }
  std::sort(doc.mentions.begin(), doc.mentions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.end, a.id) < std::tie(b.start, b.end, b.id);
  });
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) doc.mentions[i].order_index = i;
}

namespace {

std::size_t offset_field(const json& m, const char* key, const std::string& id) {
  if (!m.contains(key) || !m[key].is_number_integer() || m[key].get<long long>() < 0) {
    throw Error(ErrorCode::kValidation,
                std::string("mention ") + id + ": field '" + key + "' must be a non-negative integer",
                {id});
  }
  return m[key].get<std::size_t>();
}

}  // namespace

Document document_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "document must be an object");
  Document doc;
  if (!j.contains("doc_id") || !j["doc_id"].is_string()) {
    throw Error(ErrorCode::kValidation, "missing string field 'doc_id'");
  }
  if (!j.contains("text") || !j["text"].is_string()) {
    throw Error(ErrorCode::kValidation, "missing string field 'text'");
  }
  if (!j.contains("mentions") || !j["mentions"].is_array()) {
    throw Error(ErrorCode::kValidation, "missing array field 'mentions'");
  }
  doc.doc_id = j["doc_id"].get<std::string>();
  doc.text = j["text"].get<std::string>();
  for (const auto& m : j["mentions"]) {
    if (!m.is_object() || !m.contains("id") || !m["id"].is_string()) {
      throw Error(ErrorCode::kValidation, "mention without string 'id'");
    }
    EventMention mention;
    mention.id = m["id"].get<std::string>();
    mention.start = offset_field(m, "start", mention.id);
    mention.end = offset_field(m, "end", mention.id);
    if (!m.contains("surface") || !m["surface"].is_string()) {
      throw Error(ErrorCode::kValidation, "mention " + mention.id + ": missing 'surface'",
                  {mention.id});
    }
    mention.surface = m["surface"].get<std::string>();
    if (m.contains("status")) {
      auto status = m["status"].is_string() ? parse_status(m["status"].get<std::string>())
                                            : std::nullopt;
      if (!status) {
        throw Error(ErrorCode::kValidation, "mention " + mention.id + ": bad status", {mention.id});
      }
      mention.status = *status;
    }
    doc.mentions.push_back(std::move(mention));
  }
  if (j.contains("temporal_entities")) {
    if (!j["temporal_entities"].is_array()) {
      throw Error(ErrorCode::kValidation, "'temporal_entities' must be an array");
    }
    for (const auto& t : j["temporal_entities"]) {
      if (!t.is_object()) throw Error(ErrorCode::kValidation, "bad temporal entity");
      CharSpan span;
      span.start = offset_field(t, "start", "temporal_entity");
      span.end = offset_field(t, "end", "temporal_entity");
      doc.temporal_entities.push_back(span);
    }
  }
  normalize_document(doc);
  return doc;
}

Document parse_document(std::string_view raw) {
  json j;
  try {
    j = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed syntax: ") + e.what());
  }
  return document_from_json(j);
}

json document_to_json(const Document& doc) {
  json mentions = json::array();
  for (const auto& m : doc.mentions) {
    mentions.push_back({{"id", m.id},
                        {"start", m.start},
                        {"end", m.end},
                        {"surface", m.surface},
                        {"status", std::string(to_string(m.status))}});
  }
  json j = {{"doc_id", doc.doc_id}, {"text", doc.text}, {"mentions", std::move(mentions)}};
  if (!doc.temporal_entities.empty()) {
    json spans = json::array();
    for (const auto& s : doc.temporal_entities) spans.push_back({{"start", s.start}, {"end", s.end}});
    j["temporal_entities"] = std::move(spans);
  }
  return j;
}

std::string serialize_document(const Document& doc) { return document_to_json(doc).dump(2); }

OrientedPair canonical_pair(std::string_view a, std::string_view b, const Document& doc) {
  if (a == b) {
    throw Error(ErrorCode::kUsage, "a pair needs two distinct mentions", {std::string(a)});
  }
  const EventMention* ma = doc.find(a);
  const EventMention* mb = doc.find(b);
  for (auto [m, id] : {std::pair{ma, a}, std::pair{mb, b}}) {
    if (m == nullptr) throw Error(ErrorCode::kNotFound, "unknown mention " + std::string(id), {std::string(id)});
    if (m->status == MentionStatus::kExcluded) {
      throw Error(ErrorCode::kPrecondition, "mention " + m->id + " is excluded", {m->id});
    }
  }
  if (ma->order_index < mb->order_index) return {{ma->id, mb->id}, true};
  return {{mb->id, ma->id}, false};
}

}  // namespace evrel
