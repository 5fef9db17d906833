#pragma once

#include <stdexcept>
#include <string>

namespace regen {

// Stable numeric values: they are mirrored one-to-one by regen_status in the C API.
enum class ErrorCode : int {
  Ok = 0,
  DomainError = 1,
  InvalidStochasticMatrix = 2,
  InvalidSmallSet = 3,
  MinorizationViolated = 4,
  TourLengthOverflow = 5,
  InsufficientTrajectory = 6,
  EmptyTourList = 7,
  NonpositiveM = 8,
  StoppingRuleViolated = 9,
  NotDoeblin = 10,
  EmptySampleList = 11,
  NotIrreducible = 12,
  Periodic = 13,
  SingularSystem = 14,
  VNotBoundedBelowByOne = 15,
  UnsupportedTarget = 16,
  DriftNotSatisfied = 17,
  StateSpaceTooLarge = 18,
  ParseError = 19,
  ConfigError = 20,
  DensityRatioUndefined = 21,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

// Errors caused by bad user input (exit status 2 at the command line) rather than by a run.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace regen
