#include "kacward/error.hpp"

namespace kw {

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::check_failed: return "check_failed";
    case ErrorCode::input: return "input";
    case ErrorCode::geometry: return "geometry";
    case ErrorCode::scale: return "scale";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace kw
