#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

enum class ErrorCode {
  Domain,
  SingularMetric,
  DegenerateLevelSet,
  DivergentDistance,
  DegenerateTestFunction,
  Solver,
  ConvergenceFailure,
  OutOfBand,
  ComplexIndicial,
  BallTooLarge,
  IterationLimit,
  Resolution,
  NoCrease,
  Parameter,
  NoBarrier,
  SingularPoint,
  Resample,
  BoundExceeded,
  DataIntegrity,
  Config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace conelab
