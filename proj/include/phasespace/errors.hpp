#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasespace {

enum class ErrorKind {
  InvalidArgument,
  InvalidDensity,
  Truncation,
  SingularOrder,
  OutOfFamily,
  Singular,
  Overflow,
  Unsupported,
  Coverage,
  Stability,
  TraceDrift,
  TailBound,
  OrderMismatch,
  GridMismatch,
  Config,
  Io,
};

/// Stable kebab-case identifier, used in CLI error lines.
std::string_view kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace phasespace
