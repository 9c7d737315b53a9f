#pragma once

#include <stdexcept>
#include <string>

namespace apsense {

enum class ErrorKind {
  invalid_input,
  config,
  io,
  http,
  numeric,
};

/// Library-wide exception. `kind()` lets callers map failures to
/// machine-readable categories (the CLI serializes them as JSON).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  const char* kind_name() const {
    switch (kind_) {
      case ErrorKind::invalid_input: return "invalid_input";
      case ErrorKind::config: return "config";
      case ErrorKind::io: return "io";
      case ErrorKind::http: return "http";
      case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& msg) {
  throw Error(ErrorKind::invalid_input, msg);
}
[[noreturn]] inline void fail_config(const std::string& msg) {
  throw Error(ErrorKind::config, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(ErrorKind::io, msg);
}
[[noreturn]] inline void fail_http(const std::string& msg) {
  throw Error(ErrorKind::http, msg);
}
[[noreturn]] inline void fail_numeric(const std::string& msg) {
  throw Error(ErrorKind::numeric, msg);
}

}  // namespace apsense
