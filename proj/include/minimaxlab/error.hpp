#pragma once

#include <stdexcept>
#include <string>

namespace minimaxlab {

enum class ErrorKind {
  NonFinite,
  DimensionMismatch,
  NonConvergence,
  UnsupportedDim,
  NotLocalMax,
  NotStationary,
  NotApplicable,
  DegeneratePolynomial,
  NonPositiveBeta,
  InvalidSpec,
  NotFound,
  UnknownFixture,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace minimaxlab
