#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evrel {

// Every failure raised by the engines carries one of these codes; the
// service maps each code to exactly one HTTP status.
enum class ErrorCode {
  kValidation,    // malformed input document or request body
  kNotFound,      // unknown mention, cluster, session or document id
  kPhase,         // operation not allowed in the current task phase
  kPrecondition,  // operation allowed in this phase but its inputs are not ready
  kIntegrity,     // internal state violates an engine invariant
  kFormat,        // saved session or export payload cannot be decoded
  kUsage,         // bad arguments to a library call
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> blocking = {})
      : std::runtime_error(std::move(message)), code_(code), blocking_(std::move(blocking)) {}

  ErrorCode code() const noexcept { return code_; }

  // Items (mention ids, pair descriptions, cluster ids) that caused the failure.
  const std::vector<std::string>& blocking() const noexcept { return blocking_; }

 private:
  ErrorCode code_;
  std::vector<std::string> blocking_;
};

}  // namespace evrel
