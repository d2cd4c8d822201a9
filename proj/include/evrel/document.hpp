#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace evrel {

enum class MentionStatus { kCandidate, kIncluded, kExcluded };

std::string_view to_string(MentionStatus status);
std::optional<MentionStatus> parse_status(std::string_view text);

struct EventMention {
  std::string id;
  std::size_t start = 0;  // inclusive character offset
  std::size_t end = 0;    // exclusive character offset
  std::string surface;
  std::size_t order_index = 0;
  MentionStatus status = MentionStatus::kIncluded;

  bool operator==(const EventMention&) const = default;
};

struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const CharSpan&) const = default;
};

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<EventMention> mentions;  // sorted by order_index
  std::vector<CharSpan> temporal_entities;

  const EventMention* find(std::string_view id) const;
  EventMention* find(std::string_view id);

  // Ids of included mentions in text order.
  std::vector<std::string> included_ids() const;

  bool operator==(const Document&) const = default;
};

// Canonical unordered pair: order_index(first) < order_index(second).
struct PairKey {
  std::string first;
  std::string second;

  auto operator<=>(const PairKey&) const = default;
};

struct OrientedPair {
  PairKey key;
  bool forward = true;  // false when the caller's (a, b) was the reverse of key
};

// Character offsets are byte offsets into the UTF-8 text.
Document parse_document(std::string_view raw);
Document document_from_json(const nlohmann::json& j);

nlohmann::json document_to_json(const Document& doc);
std::string serialize_document(const Document& doc);

// Re-sorts mentions by (start, end, id), reassigns order_index and checks
// every span invariant. Throws Error(kValidation) naming the mention.
void normalize_document(Document& doc);

OrientedPair canonical_pair(std::string_view a, std::string_view b, const Document& doc);

}  // namespace evrel
