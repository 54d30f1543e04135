#include "conelab/error.hpp"

namespace conelab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::SingularMetric: return "singular-metric";
    case ErrorCode::DegenerateLevelSet: return "degenerate-level-set";
    case ErrorCode::DivergentDistance: return "divergent-distance";
    case ErrorCode::DegenerateTestFunction: return "degenerate-test-function";
    case ErrorCode::Solver: return "solver";
    case ErrorCode::ConvergenceFailure: return "convergence-failure";
    case ErrorCode::OutOfBand: return "out-of-band";
    case ErrorCode::ComplexIndicial: return "complex-indicial";
    case ErrorCode::BallTooLarge: return "ball-too-large";
    case ErrorCode::IterationLimit: return "iteration-limit";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::NoCrease: return "no-crease";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::NoBarrier: return "no-barrier";
    case ErrorCode::SingularPoint: return "singular-point";
    case ErrorCode::Resample: return "resample";
    case ErrorCode::BoundExceeded: return "bound-exceeded";
    case ErrorCode::DataIntegrity: return "data-integrity";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace conelab
