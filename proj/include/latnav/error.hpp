#pragma once

#include <stdexcept>
#include <string>

namespace latnav {

enum class ErrorKind {
  InvalidParameter,
  InvalidQuery,
  NoPath,
  NotOnPath,
  UnknownCorridor,
  ParseError,
  ValidationError,
  IoError,
};

inline const char* toString(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidQuery: return "invalid-query";
    case ErrorKind::NoPath: return "no-path";
    case ErrorKind::NotOnPath: return "not-on-path";
    case ErrorKind::UnknownCorridor: return "unknown-corridor";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ValidationError: return "validation-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(toString(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace latnav
