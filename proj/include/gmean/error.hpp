#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmean {

enum class ErrorCode {
  Index,         // tuple component outside [0, n)
  Domain,        // parameter outside an operation's domain (m > N, r < 1, ...)
  EmptySupport,  // no tuple of positive product weight
  Overflow,      // fixed-width integer overflow (binomials, grid sizes)
  Capacity,      // configured size cap exceeded
  Validation,    // malformed or inconsistent input data
  Precondition,  // report-level failure, e.g. domination condition absent
  Io,
};

/// Stable machine-readable name, e.g. "domain-error".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace gmean
