#pragma once

#include <stdexcept>
#include <string>

namespace dmps {

enum class ErrorKind {
  InvalidParameter,
  NonConvergence,
  EvaluationFailure,
  QuadratureFailure,
  NotNormalizable,
  NumericalBlowup,
  DivergentIntegral,
};

const char* to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this one exception type; callers
// switch on kind() when they need to map failures (the CLI maps them to exit
// codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, message);
}

}  // namespace detail
}  // namespace dmps
