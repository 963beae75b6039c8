#pragma once

#include <stdexcept>
#include <string>

namespace kinex {

enum class ErrorKind {
  InvalidConfig,
  ZeroTotalWealth,
  EmptyInput,
  DegenerateInput,
  NonpositiveX,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kinex
