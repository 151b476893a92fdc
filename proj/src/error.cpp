#include "collar/error.hpp"

namespace collar {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::NonpositiveWarping: return "nonpositive_warping";
    case ErrorCode::ProfileNotDifferentiable: return "profile_not_differentiable";
    case ErrorCode::NonconstantWeight: return "nonconstant_weight";
    case ErrorCode::IntegrationFailure: return "integration_failure";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::ExpressionSyntax: return "expression_syntax";
    case ErrorCode::ConfigSyntax: return "config_syntax";
    case ErrorCode::ConfigSemantic: return "config_semantic";
  }
  return "unknown";
}

}  // namespace collar
