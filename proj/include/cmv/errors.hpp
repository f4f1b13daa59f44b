#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmv {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  EmptyInput,
  UnboundParameter,
  Domain,
  NotPositiveDefinite,
  DegeneratePlane,
  FrameNotOrthonormal,
  NotContact,
  NotCompatible,
  UmbilicPoint,
  ZeroK,
  NonpositiveK,
  InvalidParams,
  Schema,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures additionally report the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(ErrorKind::Syntax,
              message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cmv
