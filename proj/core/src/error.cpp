#include "rbk/error.hpp"

namespace rbk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IncompatibleSubvariety: return "INCOMPATIBLE_SUBVARIETY";
    case ErrorCode::NonAmpleReference: return "NON_AMPLE_REFERENCE";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::Overflow: return "OVERFLOW";
    case ErrorCode::QuadratureUnderflow: return "QUADRATURE_UNDERFLOW";
    case ErrorCode::NotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::IllConditioned: return "ILL_CONDITIONED";
    case ErrorCode::LogOfZero: return "LOG_OF_ZERO";
    case ErrorCode::NotInImage: return "NOT_IN_IMAGE";
    case ErrorCode::HullDegenerate: return "HULL_DEGENERATE";
    case ErrorCode::InsufficientSweep: return "INSUFFICIENT_SWEEP";
    case ErrorCode::Unbounded: return "UNBOUNDED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::IoOutDir: return "IO_OUT_DIR";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoOutDir:
    case ErrorCode::Io:
      return 2;
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::IncompatibleSubvariety:
    case ErrorCode::NonAmpleReference:
    case ErrorCode::GridTooCoarse:
      return 3;
    default:
      return 1;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace rbk
