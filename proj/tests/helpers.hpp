#pragma once

#include <random>
#include <string>
#include <vector>

#include "evrel/document.hpp"
#include "evrel/temporal.hpp"
#include "oracles.hpp"

namespace testing_support {

inline std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("e" + std::to_string(i + 1));
  return out;
}

constexpr auto B = evrel::TemporalLabel::kBefore;
constexpr auto A = evrel::TemporalLabel::kAfter;
constexpr auto E = evrel::TemporalLabel::kEqual;
constexpr auto V = evrel::TemporalLabel::kVague;

// "An accident: two cars collided, causing damage; police responded."
inline evrel::Document accident_document() {
  evrel::Document doc;
  doc.doc_id = "accident";
  doc.text = "An accident: two cars collided, causing damage; police responded.";
  auto add = [&](const std::string& id, const std::string& word) {
    evrel::EventMention m;
    m.id = id;
    m.start = doc.text.find(word);
    m.end = m.start + word.size();
    m.surface = word;
    doc.mentions.push_back(m);
  };
  add("accident", "accident");
  add("collided", "collided");
  add("damage", "damage");
  add("responded", "responded");
  evrel::normalize_document(doc);
  return doc;
}

// Oriented letter of a direct cell read from a to b.
inline char direct_letter(const evrel::RelationMatrix& m, std::size_t a, std::size_t b) {
  const auto& c = a < b ? m.cell(a, b) : m.cell(b, a);
  const char l = oracle::letter(c.label);
  return a < b ? l : oracle::invert_letter(l);
}

// Folds the direct labels along a full walk of mention ids.
inline char fold_walk(const evrel::RelationMatrix& m, const std::vector<std::string>& walk) {
  std::vector<char> legs;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const std::size_t a = m.require_index(walk[i]);
    const std::size_t b = m.require_index(walk[i + 1]);
    const auto& c = a < b ? m.cell(a, b) : m.cell(b, a);
    if (c.provenance != evrel::Provenance::kDirect) return '!';
    legs.push_back(direct_letter(m, a, b));
  }
  return oracle::fold(legs);
}

}  // namespace testing_support
