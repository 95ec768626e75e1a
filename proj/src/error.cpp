#include "gmean/error.hpp"

namespace gmean {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Index: return "index-error";
    case ErrorCode::Domain: return "domain-error";
    case ErrorCode::EmptySupport: return "empty-support-error";
    case ErrorCode::Overflow: return "overflow-error";
    case ErrorCode::Capacity: return "capacity-error";
    case ErrorCode::Validation: return "validation-error";
    case ErrorCode::Precondition: return "precondition-violation";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown-error";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace gmean
