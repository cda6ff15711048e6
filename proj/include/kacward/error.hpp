#pragma once

#include <stdexcept>
#include <string>

namespace kw {

// Numeric values double as CLI exit codes.
enum class ErrorCode {
  check_failed = 1,
  input = 2,
  geometry = 3,
  scale = 4,
  precondition = 5,
  numeric = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

const char* error_code_name(ErrorCode code);

}  // namespace kw
