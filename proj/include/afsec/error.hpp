#pragma once

#include <stdexcept>
#include <string>

namespace afsec {

enum class ErrorKind {
  invalid_input,
  dimension_mismatch,
  parse,
  sign_pattern,
  not_converged,
  unbounded,
  numerical,
  infeasible,
  not_degraded,
  unsupported,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::parse: return "parse";
    case ErrorKind::sign_pattern: return "sign_pattern";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::unbounded: return "unbounded";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::not_degraded: return "not_degraded";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

/// Base exception for every library failure. `kind()` lets callers branch
/// without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace afsec
