#include "minimaxlab/optimality.hpp"

#include "minimaxlab/error.hpp"

#include <cmath>

namespace minimaxlab {

const char* to_string(SecondOrderVerdict v) {
  switch (v) {
    case SecondOrderVerdict::SufficientStrictLocalMinimax: return "SufficientStrictLocalMinimax";
    case SecondOrderVerdict::NecessaryHolds: return "NecessaryHolds";
    case SecondOrderVerdict::NecessaryFails: return "NecessaryFails";
    case SecondOrderVerdict::DegenerateYY: return "DegenerateYY";
  }
  return "?";
}

namespace optimality {

FirstOrderReport first_order_check(const GameOracle& f, const Vec& x, const Vec& y, double tol) {
  if (x.size() != f.x_dim() || y.size() != f.y_dim())
    throw Error(ErrorKind::DimensionMismatch, "point does not match the oracle");
  FirstOrderReport r;
  r.grad_x_norm = f.grad_x(x, y).norm();
  r.grad_y_norm = f.grad_y(x, y).norm();
  const double bound = tol * (1.0 + std::abs(f.value(x, y)));
  r.stationary = r.grad_x_norm <= bound && r.grad_y_norm <= bound;
  return r;
}

SecondOrderReport second_order_invertible(const GameOracle& f, const Vec& x, const Vec& y, double tol) {
  const FirstOrderReport first = first_order_check(f, x, y, tol);
  if (!first.stationary) throw Error(ErrorKind::NotStationary, "second-order test needs a stationary point");
  SecondOrderReport r;
  r.grad_norm = std::hypot(first.grad_x_norm, first.grad_y_norm);

  const Mat hxx = f.hess_xx(x, y);
  const Mat hxy = f.hess_xy(x, y);
  const Mat hyy = f.hess_yy(x, y);
  const Eigen::Index n = hxx.rows();
  const Eigen::Index m = hyy.rows();
  Mat full(n + m, n + m);
  full << hxx, hxy, hxy.transpose(), hyy;
  const double scale = 1.0 + linalg::sym_eig(full).eigenvalues.cwiseAbs().maxCoeff();
  const double inv_tol = 1e-7 * scale;
  const double eig_tol = tol * scale;

  const Vec yy_eigs = linalg::sym_eig(hyy).eigenvalues;
  r.yy_definiteness = linalg::definiteness(hyy, eig_tol);
  r.yy_invertible = yy_eigs.cwiseAbs().minCoeff() > inv_tol;
  if (!r.yy_invertible) {
    r.verdict = SecondOrderVerdict::DegenerateYY;
    return r;
  }
  r.schur_complement = hxx - hxy * hyy.inverse() * hxy.transpose();
  r.schur_complement = 0.5 * (r.schur_complement + r.schur_complement.transpose());
  r.schur_definiteness = linalg::definiteness(r.schur_complement, eig_tol);
  const bool yy_negative = r.yy_definiteness == linalg::Definiteness::NegativeDefinite;
  if (yy_negative && r.schur_definiteness == linalg::Definiteness::PositiveDefinite) {
    r.verdict = SecondOrderVerdict::SufficientStrictLocalMinimax;
  } else if (!yy_negative || !linalg::is_psd(r.schur_definiteness)) {
    r.verdict = SecondOrderVerdict::NecessaryFails;
  } else {
    r.verdict = SecondOrderVerdict::NecessaryHolds;
  }
  return r;
}

VerifyResult local_saddle_check(const GameOracle& f, const Vec& x, const Vec& y, double radius,
                                const EnvelopeConfig& cfg) {
  const VerifyResult y_side = local_max_test(f, x, y, radius, cfg);
  if (y_side.verdict == Verdict::No) return y_side;
  // x* minimizes f(., y*) iff x* maximizes -f(., y*).
  OracleFunctions fns;
  fns.value = [&f](const Vec& yy, const Vec& xx) { return -f.value(xx, yy); };
  const FunctionOracle flipped("flipped", f.y_dim(), f.x_dim(), std::move(fns));
  VerifyResult x_side = local_max_test(flipped, y, x, radius, cfg);
  x_side.evidence.stage = "saddle_x";
  x_side.evidence.witness_x.swap(x_side.evidence.witness_y);
  if (x_side.verdict == Verdict::No) return x_side;
  VerifyResult out = y_side;
  out.evidence.stage = "saddle";
  if (x_side.verdict == Verdict::Inconclusive) out.verdict = Verdict::Inconclusive;
  return out;
}

}  // namespace optimality
}  // namespace minimaxlab
