#include "minimaxlab/quadratic.hpp"

#include "minimaxlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minimaxlab {

namespace {

void require_symmetric(const Mat& s, const char* name) {
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorKind::DimensionMismatch, std::string(name) + " is not symmetric");
}

}  // namespace

void QuadraticGame::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols())
    throw Error(ErrorKind::DimensionMismatch, "A must be a nonempty square matrix");
  if (B.rows() == 0 || B.rows() != B.cols())
    throw Error(ErrorKind::DimensionMismatch, "B must be a nonempty square matrix");
  if (C.rows() != A.rows() || C.cols() != B.rows())
    throw Error(ErrorKind::DimensionMismatch, "C must be n x m");
  if (a.size() != A.rows()) throw Error(ErrorKind::DimensionMismatch, "a must have length n");
  if (b.size() != B.rows()) throw Error(ErrorKind::DimensionMismatch, "b must have length m");
  linalg::require_finite(A, "A");
  linalg::require_finite(B, "B");
  linalg::require_finite(C, "C");
  linalg::require_finite(a, "a");
  linalg::require_finite(b, "b");
  if (!std::isfinite(c)) throw Error(ErrorKind::NonFinite, "c");
  require_symmetric(A, "A");
  require_symmetric(B, "B");
}

QuadraticGame QuadraticGame::homogeneous(Mat A, Mat B, Mat C) {
  QuadraticGame g;
  g.a = Vec::Zero(A.rows());
  g.b = Vec::Zero(B.rows());
  g.A = std::move(A);
  g.B = std::move(B);
  g.C = std::move(C);
  return g;
}

bool AffineSet::contains(const Vec& z, double tol) const {
  if (empty || z.size() != basepoint.size()) return false;
  const Vec d = z - basepoint;
  const Vec resid = basis.cols() ? Vec(d - basis * (basis.transpose() * d)) : d;
  return resid.norm() <= tol * (1.0 + z.norm());
}

Vec AffineSet::project(const Vec& z) const {
  if (empty) throw Error(ErrorKind::NotApplicable, "projection onto an empty set");
  const Vec d = z - basepoint;
  return basis.cols() ? Vec(basepoint + basis * (basis.transpose() * d)) : basepoint;
}

const Condition* ClassificationReport::find(const std::string& name) const {
  for (const auto& c : condition_trace)
    if (c.name == name) return &c;
  return nullptr;
}

namespace quadratic {

namespace {

void check_dims(const QuadraticGame& g, const Vec& x, const Vec& y) {
  if (x.size() != g.n() || y.size() != g.m())
    throw Error(ErrorKind::DimensionMismatch, "point does not match game dimensions");
}

double min_eig(const Mat& s) { return linalg::sym_eig(s).eigenvalues.minCoeff(); }
double max_eig(const Mat& s) { return linalg::sym_eig(s).eigenvalues.maxCoeff(); }

struct MinimaxTest {
  double b_max = 0.0;
  double schur_min = 0.0;
  bool b_nsd = false;
  bool schur_psd = false;
  Mat p_l;
};

// B <= 0 and P_L (A - C B^+ C') P_L >= 0 with L = C P_B.
MinimaxTest minimax_test(const QuadraticGame& g, double eig_tol) {
  MinimaxTest t;
  t.b_max = max_eig(g.B);
  t.b_nsd = t.b_max <= eig_tol;
  const Mat p_b = linalg::null_projector(g.B);
  const Mat l = g.C * p_b;
  t.p_l = linalg::null_projector(l);
  const Mat schur = t.p_l * (g.A - g.C * linalg::pinv(g.B) * g.C.transpose()) * t.p_l;
  t.schur_min = min_eig(schur);
  t.schur_psd = t.schur_min >= -eig_tol;
  return t;
}

// Reorders a set given in (y, x) coordinates into (x, y).
AffineSet swap_blocks(const AffineSet& s, Eigen::Index first, Eigen::Index second) {
  AffineSet out;
  out.empty = s.empty;
  if (s.empty) return out;
  auto swap_rows = [&](const Mat& in) {
    Mat r(in.rows(), in.cols());
    r.topRows(second) = in.bottomRows(second);
    r.bottomRows(first) = in.topRows(first);
    return r;
  };
  out.basepoint = swap_rows(s.basepoint);
  out.basis = swap_rows(s.basis);
  return out;
}

struct MinimaxSets {
  SolutionConcept global;
  SolutionConcept local;
};

MinimaxSets minimax_sets(const QuadraticGame& g, const AffineSet& stationary, const MinimaxTest& t) {
  MinimaxSets out;
  const bool exists = !stationary.empty && t.b_nsd && t.schur_psd;
  out.global.exists = out.local.exists = exists;
  if (!exists) {
    out.global.description = out.local.description = "none";
    return out;
  }
  const Eigen::Index n = g.n();
  const Eigen::Index m = g.m();
  Mat gate = Mat::Identity(n + m, n + m);
  gate.topLeftCorner(n, n) = t.p_l;
  out.global.set.empty = false;
  out.global.set.basepoint = stationary.basepoint;
  out.global.set.basis = linalg::null_basis(gate * block_matrix(g));
  out.global.description = "z* + null(diag(P_L, I) K)";
  out.local.set = stationary;
  out.local.description = "stationary set";
  return out;
}

}  // namespace

double eval(const QuadraticGame& g, const Vec& x, const Vec& y) {
  check_dims(g, x, y);
  return 0.5 * (x.dot(g.A * x) + 2.0 * x.dot(g.C * y) + y.dot(g.B * y) + 2.0 * g.a.dot(x) +
                2.0 * g.b.dot(y) + g.c);
}

std::pair<Vec, Vec> grad(const QuadraticGame& g, const Vec& x, const Vec& y) {
  check_dims(g, x, y);
  return {g.A * x + g.C * y + g.a, g.C.transpose() * x + g.B * y + g.b};
}

Mat block_matrix(const QuadraticGame& g) {
  const Eigen::Index n = g.n();
  const Eigen::Index m = g.m();
  Mat k(n + m, n + m);
  k << g.A, g.C, g.C.transpose(), g.B;
  return k;
}

AffineSet stationary_set(const QuadraticGame& g, double tol) {
  const Mat k = block_matrix(g);
  Vec rhs(g.n() + g.m());
  rhs << -g.a, -g.b;
  AffineSet s;
  const Vec z = linalg::pinv(k) * rhs;
  const double scale = std::max(1.0, k.norm());
  if ((k * z - rhs).norm() > tol * scale * (1.0 + rhs.norm())) return s;
  s.empty = false;
  s.basepoint = z;
  s.basis = linalg::null_basis(k);
  return s;
}

QuadraticGame mirror(const QuadraticGame& g) {
  QuadraticGame r;
  r.A = -g.B;
  r.B = -g.A;
  r.C = -g.C.transpose();
  r.a = -g.b;
  r.b = -g.a;
  r.c = -g.c;
  return r;
}

ClassificationReport classify(const QuadraticGame& g, double tol) {
  g.validate();
  ClassificationReport rep;
  const Mat k = block_matrix(g);
  const double eig_tol = tol * std::max(1.0, k.norm());
  const Eigen::Index n = g.n();
  const Eigen::Index m = g.m();

  rep.stationary = stationary_set(g, tol);
  const bool stationary_exists = !rep.stationary.empty;
  {
    Vec rhs(n + m);
    rhs << -g.a, -g.b;
    const double resid = stationary_exists ? (k * rep.stationary.basepoint - rhs).norm() : rhs.norm();
    rep.condition_trace.push_back({"range_condition", stationary_exists, resid});
  }

  const MinimaxTest mm = minimax_test(g, eig_tol);
  rep.condition_trace.push_back({"minimax.B_nsd", mm.b_nsd, mm.b_max});
  rep.condition_trace.push_back({"minimax.schur_psd", mm.schur_psd, mm.schur_min});
  const MinimaxSets mm_sets = minimax_sets(g, rep.stationary, mm);
  rep.global_minimax = mm_sets.global;
  rep.local_minimax = mm_sets.local;

  const QuadraticGame mir = mirror(g);
  const MinimaxTest mx = minimax_test(mir, eig_tol);
  rep.condition_trace.push_back({"maximin.A_psd", mx.b_nsd, -mx.b_max});
  rep.condition_trace.push_back({"maximin.schur_nsd", mx.schur_psd, -mx.schur_min});
  const AffineSet mir_stationary = swap_blocks(rep.stationary, n, m);
  const MinimaxSets mx_sets = minimax_sets(mir, mir_stationary, mx);
  rep.global_maximin = mx_sets.global;
  rep.local_maximin = mx_sets.local;
  rep.global_maximin.set = swap_blocks(mx_sets.global.set, m, n);
  rep.local_maximin.set = swap_blocks(mx_sets.local.set, m, n);
  if (rep.global_maximin.exists) rep.global_maximin.description = "z* + null(diag(I, P_M) K), mirrored";

  const double a_min = min_eig(g.A);
  const double b_max = mm.b_max;
  const bool a_psd = a_min >= -eig_tol;
  const bool b_nsd = b_max <= eig_tol;
  rep.condition_trace.push_back({"saddle.A_psd", a_psd, a_min});
  rep.condition_trace.push_back({"saddle.B_nsd", b_nsd, b_max});
  rep.saddle.exists = a_psd && b_nsd && stationary_exists;
  if (rep.saddle.exists) {
    rep.saddle.set = rep.stationary;
    rep.saddle.description = "stationary set";
  } else {
    rep.saddle.description = "none";
  }

  // Translation to a stationary point homogenizes the game without touching A, B, C.
  rep.lrp_neighborhood_note =
      "eigenspace neighborhoods: x-box aligned with eigenvectors of A, y-box with eigenvectors of B";
  if (stationary_exists) {
    const Mat a_p = linalg::pos_neg_parts(g.A, tol).first;
    const Mat b_n = linalg::pos_neg_parts(g.B, tol).second;
    const Mat l = g.C * linalg::null_projector(b_n);
    const Mat p_l = linalg::null_projector(l);
    const double neg_min = min_eig(p_l * (g.A - g.C * linalg::pinv(b_n) * g.C.transpose()) * p_l);
    const Mat m_map = g.C.transpose() * linalg::null_projector(a_p);
    const Mat p_m = linalg::null_projector(m_map);
    const double pos_max = max_eig(p_m * (g.B - g.C.transpose() * linalg::pinv(a_p) * g.C) * p_m);
    const bool neg_ok = neg_min >= -eig_tol;
    const bool pos_ok = pos_max <= eig_tol;
    rep.condition_trace.push_back({"lrp.x_side_psd", neg_ok, neg_min});
    rep.condition_trace.push_back({"lrp.y_side_nsd", pos_ok, pos_max});
    rep.lrp.exists = neg_ok && pos_ok;
  } else {
    rep.condition_trace.push_back({"lrp.x_side_psd", false, std::numeric_limits<double>::quiet_NaN()});
    rep.condition_trace.push_back({"lrp.y_side_nsd", false, std::numeric_limits<double>::quiet_NaN()});
  }
  if (rep.lrp.exists) {
    rep.lrp.set = rep.stationary;
    rep.lrp.description = "stationary set";
  } else {
    rep.lrp.description = "none";
  }
  return rep;
}

double envelope_1d(const QuadraticGame& g, EnvelopeKind kind, double eps, double point, double center) {
  g.validate();
  if (g.n() != 1 || g.m() != 1) throw Error(ErrorKind::DimensionMismatch, "envelope_1d needs a 1+1 game");
  if (!(eps >= 0.0)) throw Error(ErrorKind::DimensionMismatch, "eps must be nonnegative");
  // Along the free variable s the payoff is curv/2 s^2 + slope s + const.
  const bool upper = kind == EnvelopeKind::Upper;
  const double curv = upper ? g.B(0, 0) : g.A(0, 0);
  const double slope = upper ? g.C(0, 0) * point + g.b(0) : g.C(0, 0) * point + g.a(0);
  auto f = [&](double s) {
    Vec x(1), y(1);
    x << (upper ? point : s);
    y << (upper ? s : point);
    return eval(g, x, y);
  };
  const double lo = center - eps;
  const double hi = center + eps;
  double best = upper ? std::max(f(lo), f(hi)) : std::min(f(lo), f(hi));
  const bool interior_extremum = upper ? curv < 0.0 : curv > 0.0;
  if (interior_extremum) {
    const double s = -slope / curv;
    if (s > lo && s < hi) best = upper ? std::max(best, f(s)) : std::min(best, f(s));
  }
  return best;
}

bool UpperEnvelope::in_domain(const Vec& x, double tol) const {
  if (!finite_somewhere) return false;
  return (domain_normal.transpose() * x - domain_rhs).norm() <= tol * (1.0 + x.norm());
}

double UpperEnvelope::value(const Vec& x) const {
  if (!in_domain(x)) return std::numeric_limits<double>::infinity();
  return 0.5 * x.dot(quad * x) + linear.dot(x) + constant;
}

UpperEnvelope upper_envelope_quadratic(const QuadraticGame& g, double tol) {
  g.validate();
  UpperEnvelope env;
  const double eig_tol = tol * std::max(1.0, block_matrix(g).norm());
  env.finite_somewhere = max_eig(g.B) <= eig_tol;
  const Mat b_pinv = linalg::pinv(g.B);
  const Mat p_b = linalg::null_projector(g.B);
  env.domain_normal = g.C * p_b;
  env.domain_rhs = -(p_b * g.b);
  env.quad = g.A - g.C * b_pinv * g.C.transpose();
  env.linear = g.a - g.C * b_pinv * g.b;
  env.constant = 0.5 * (g.c - g.b.dot(b_pinv * g.b));
  return env;
}

}  // namespace quadratic
}  // namespace minimaxlab
