#pragma once

#include "minimaxlab/envelope.hpp"
#include "minimaxlab/linalg.hpp"
#include "minimaxlab/oracle.hpp"

namespace minimaxlab {

struct FirstOrderReport {
  bool stationary = false;
  double grad_x_norm = 0.0;
  double grad_y_norm = 0.0;
};

enum class SecondOrderVerdict { SufficientStrictLocalMinimax, NecessaryHolds, NecessaryFails, DegenerateYY };

const char* to_string(SecondOrderVerdict v);

struct SecondOrderReport {
  double grad_norm = 0.0;
  linalg::Definiteness yy_definiteness = linalg::Definiteness::Zero;
  bool yy_invertible = false;
  Mat schur_complement;  // empty unless yy_invertible
  linalg::Definiteness schur_definiteness = linalg::Definiteness::Zero;
  SecondOrderVerdict verdict = SecondOrderVerdict::DegenerateYY;
};

namespace optimality {

inline constexpr double kStationaryTol = 1e-8;

// Gradient norms against tol * (1 + |f|).
FirstOrderReport first_order_check(const GameOracle& f, const Vec& x, const Vec& y, double tol = kStationaryTol);

// Throws NotStationary when the first-order check fails.
SecondOrderReport second_order_invertible(const GameOracle& f, const Vec& x, const Vec& y,
                                          double tol = kStationaryTol);

// f(x*, y) <= f(x*, y*) <= f(x, y*) on sampled boxes of the given radius.
VerifyResult local_saddle_check(const GameOracle& f, const Vec& x, const Vec& y, double radius,
                                const EnvelopeConfig& cfg = {});

}  // namespace optimality
}  // namespace minimaxlab
