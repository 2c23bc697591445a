#pragma once

#include <stdexcept>
#include <string>

namespace relthue {

enum class ErrorKind {
  kInput,            // malformed arguments (dimension mismatch, zero divisor, ...)
  kParse,            // field-spec file could not be parsed
  kVerification,     // supplied algebraic data failed an exact or numeric check
  kCardinalityCap,   // an enumeration would exceed the configured cap
  kPrecision,        // working precision too low to certify a numeric step
  kMissingCheckpoint,
  kUnsupported,      // e.g. Case B resolvents without cubic-extension data
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for each error kind; 0 is success and 1 is reserved for
/// unexpected failures.
constexpr int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return 2;
    case ErrorKind::kParse: return 2;
    case ErrorKind::kVerification: return 3;
    case ErrorKind::kCardinalityCap: return 4;
    case ErrorKind::kPrecision: return 5;
    case ErrorKind::kMissingCheckpoint: return 6;
    case ErrorKind::kUnsupported: return 7;
  }
  return 1;
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace relthue
