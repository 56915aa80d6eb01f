#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace suplab {

enum class ErrorKind {
  InvalidParameter,
  InvalidInput,
  Parse,
  Validation,
  Generation,
  NoCycles,
  DegenerateInput,
  InvalidState,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without parsing messages.
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

}  // namespace suplab
