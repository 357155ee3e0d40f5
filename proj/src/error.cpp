#include "minimaxlab/error.hpp"

namespace minimaxlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::NotLocalMax: return "NotLocalMax";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::DegeneratePolynomial: return "DegeneratePolynomial";
    case ErrorKind::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace minimaxlab
