#pragma once

#include <stdexcept>
#include <string>

namespace chowforge {

// Machine-readable error categories surfaced through the CLI and bindings.
enum class ErrorCode {
  Parse,                   // malformed input (files, expressions, subsets)
  Capacity,                // configured size limits exceeded
  NotAFlat,                // a subset used where a proper nonempty flat is required
  Rank,                    // rank/looplessness/matroid-structure violations
  InfeasiblePrecondition,  // a documented precondition does not hold for the input
  Internal,                // invariant broken inside the library; always a bug
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace chowforge
