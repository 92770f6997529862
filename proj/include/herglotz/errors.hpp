#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace herglotz {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  UnboundVariable,
  Domain,
  NonDifferentiable,
  BadInterval,
  DelayNotAligned,
  OutOfDomain,
  FixedNode,
  NonFinite,
  BadGuess,
  Config,
};

const char* to_string(ErrorKind kind);

/// Base of every exception thrown by the library. The kind decides how the
/// CLI maps the failure onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Configuration-class failures (bad input) as opposed to numerical ones.
  bool is_configuration_error() const noexcept;

 private:
  ErrorKind kind_;
};

/// Parse failure; `offset` is the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, const std::string& what, std::size_t offset)
      : Error(kind, what + " at offset " + std::to_string(offset)),
        detail_(what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

}  // namespace herglotz
