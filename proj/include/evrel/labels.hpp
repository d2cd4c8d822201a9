#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace evrel {

// Start-time relation between two event mentions. kVague means the order
// cannot be determined from the text ("uncertain" in the annotator UI).
enum class TemporalLabel : std::uint8_t { kBefore = 0, kAfter = 1, kEqual = 2, kVague = 3 };

inline constexpr std::array<TemporalLabel, 4> kAllLabels = {
    TemporalLabel::kBefore, TemporalLabel::kAfter, TemporalLabel::kEqual, TemporalLabel::kVague};

constexpr TemporalLabel invert(TemporalLabel label) noexcept {
  switch (label) {
    case TemporalLabel::kBefore: return TemporalLabel::kAfter;
    case TemporalLabel::kAfter: return TemporalLabel::kBefore;
    default: return label;
  }
}

constexpr bool is_definite(TemporalLabel label) noexcept { return label != TemporalLabel::kVague; }

// Result of composing {i,k} with {k,j}. An empty optional is the ANNOTATE
// outcome: no label for {i,j} is licensed and the pair must be judged.
using Composed = std::optional<TemporalLabel>;

inline constexpr Composed kAnnotate = std::nullopt;

// The sixteen-row constraint table over start-time labels.
constexpr Composed compose(TemporalLabel ik, TemporalLabel kj) noexcept {
  using L = TemporalLabel;
  if (ik == L::kVague || kj == L::kVague) return kAnnotate;
  if (ik == L::kEqual) return kj;
  if (kj == L::kEqual) return ik;
  if (ik == kj) return ik;
  return kAnnotate;
}

// Bit set over the three definite labels, used by the closure.
using LabelMask = std::uint8_t;

constexpr LabelMask mask_of(TemporalLabel label) noexcept {
  return is_definite(label) ? static_cast<LabelMask>(1u << static_cast<unsigned>(label)) : 0;
}

constexpr LabelMask invert_mask(LabelMask mask) noexcept {
  // swap the BEFORE and AFTER bits, keep EQUAL
  return static_cast<LabelMask>(((mask & 1u) << 1) | ((mask & 2u) >> 1) | (mask & 4u));
}

std::string_view to_string(TemporalLabel label);

// Accepts BEFORE/AFTER/EQUAL/VAGUE in any case, plus "uncertain" as VAGUE.
std::optional<TemporalLabel> parse_label(std::string_view text);

}  // namespace evrel
