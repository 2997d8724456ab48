#pragma once

#include <stdexcept>
#include <string>

namespace fmorrap {

enum class ErrorKind {
  invalid_argument,  // precondition or invariant violated by the caller
  degenerate,        // zero mass / zero variance: the quantity is undefined
  parse,             // malformed input file
  io,                // filesystem failure
  internal,          // a loop guard or postcondition tripped
};

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

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::invalid_argument, message);
}

}  // namespace fmorrap
