#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbk {

enum class ErrorCode {
  IncompatibleSubvariety,
  NonAmpleReference,
  GridTooCoarse,
  Overflow,
  QuadratureUnderflow,
  NotPositiveDefinite,
  IllConditioned,
  LogOfZero,
  NotInImage,
  HullDegenerate,
  InsufficientSweep,
  Unbounded,
  ParseError,
  ValidationError,
  IoOutDir,
  Io,
};

/// Machine-parsable upper-case name, e.g. "IO_OUT_DIR".
std::string_view to_string(ErrorCode code);

/// Process exit status for a failure of this kind: 1 numeric, 2 IO, 3 validation.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rbk
