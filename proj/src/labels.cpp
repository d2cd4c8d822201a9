#include "evrel/labels.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "evrel/error.hpp"

namespace evrel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kPhase: return "phase_violation";
    case ErrorCode::kPrecondition: return "precondition_failed";
    case ErrorCode::kIntegrity: return "integrity_violation";
    case ErrorCode::kFormat: return "format_error";
    case ErrorCode::kUsage: return "usage_error";
  }
  return "unknown";
}

std::string_view to_string(TemporalLabel label) {
  switch (label) {
    case TemporalLabel::kBefore: return "BEFORE";
    case TemporalLabel::kAfter: return "AFTER";
    case TemporalLabel::kEqual: return "EQUAL";
    case TemporalLabel::kVague: return "VAGUE";
  }
  return "VAGUE";
}

std::optional<TemporalLabel> parse_label(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "BEFORE") return TemporalLabel::kBefore;
  if (upper == "AFTER") return TemporalLabel::kAfter;
  if (upper == "EQUAL") return TemporalLabel::kEqual;
  if (upper == "VAGUE" || upper == "UNCERTAIN") return TemporalLabel::kVague;
  return std::nullopt;
}

}  // namespace evrel
