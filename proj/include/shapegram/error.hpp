#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapegram {

enum class ErrorCode {
  MalformedDocument,
  MissingField,
  NonIntegerCoordinate,
  DuplicatePosition,
  EmptyModel,
  EmptyShape,
  UnknownShape,
  UnknownClass,
  InvalidPart,
  InvalidShapeSet,
  DanglingReference,
  EmptyInput,
  ConflictingPlacement,
  StaleChoice,
  NothingToUndo,
  Unsupported,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries a machine-readable code so the
// CLI and HTTP layers can map it onto exit codes and status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shapegram
