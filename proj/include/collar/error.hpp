#pragma once

#include <stdexcept>
#include <string>

namespace collar {

enum class ErrorCode {
  InvalidArgument,
  OutOfRange,
  DimensionMismatch,
  NonpositiveWarping,
  ProfileNotDifferentiable,
  NonconstantWeight,
  IntegrationFailure,
  NoConvergence,
  ExpressionSyntax,
  ConfigSyntax,
  ConfigSemantic,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (tests, CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace collar
