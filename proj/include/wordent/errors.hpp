#pragma once

#include <stdexcept>
#include <string>

namespace wordent {

enum class ErrorKind {
  Validation,
  Lookup,
  DegenerateDistribution,
  Domain,
  UnsupportedOrder,
  Tractability,
  MalformedWord,
  Schema,
  Io,
  Config,
  Precondition,
  DegenerateFit,
  Collinearity,
  PartitionMismatch,
};

const char* to_string(ErrorKind kind);

// Every error raised by the library carries a kind so callers (and tests) can
// branch on the failure class without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace wordent
