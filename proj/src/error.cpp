#include "dmps/error.hpp"

namespace dmps {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter:
      return "InvalidParameter";
    case ErrorKind::NonConvergence:
      return "NonConvergence";
    case ErrorKind::EvaluationFailure:
      return "EvaluationFailure";
    case ErrorKind::QuadratureFailure:
      return "QuadratureFailure";
    case ErrorKind::NotNormalizable:
      return "NotNormalizable";
    case ErrorKind::NumericalBlowup:
      return "NumericalBlowup";
    case ErrorKind::DivergentIntegral:
      return "DivergentIntegral";
  }
  return "Unknown";
}

}  // namespace dmps
