#pragma once

#include "minimaxlab/linalg.hpp"

#include <string>
#include <vector>

namespace minimaxlab {

// q(x, y) = 1/2 (x'Ax + 2x'Cy + y'By + 2a'x + 2b'y + c)
struct QuadraticGame {
  Mat A;
  Mat B;
  Mat C;
  Vec a;
  Vec b;
  double c = 0.0;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.rows(); }

  // Throws DimensionMismatch or NonFinite.
  void validate() const;

  static QuadraticGame homogeneous(Mat A, Mat B, Mat C);
};

// Flat affine set {basepoint + basis * t}; `empty` when the defining system has no solution.
struct AffineSet {
  bool empty = true;
  Vec basepoint;
  Mat basis;

  Eigen::Index dimension() const { return empty ? -1 : basis.cols(); }
  bool contains(const Vec& z, double tol = 1e-7) const;
  // Nearest point of the set to z (orthogonal projection); requires !empty.
  Vec project(const Vec& z) const;
};

struct Condition {
  std::string name;
  bool holds = false;
  double witness = 0.0;  // min eigenvalue, max eigenvalue or residual, per name
};

struct SolutionConcept {
  bool exists = false;
  AffineSet set;
  std::string description;
};

struct ClassificationReport {
  AffineSet stationary;
  SolutionConcept global_minimax;
  SolutionConcept local_minimax;
  SolutionConcept global_maximin;
  SolutionConcept local_maximin;
  SolutionConcept saddle;
  SolutionConcept lrp;
  std::string lrp_neighborhood_note;
  std::vector<Condition> condition_trace;

  const Condition* find(const std::string& name) const;
};

namespace quadratic {

inline constexpr double kDefaultTol = 1e-8;

double eval(const QuadraticGame& g, const Vec& x, const Vec& y);
std::pair<Vec, Vec> grad(const QuadraticGame& g, const Vec& x, const Vec& y);

// [[A, C], [C', B]]
Mat block_matrix(const QuadraticGame& g);

AffineSet stationary_set(const QuadraticGame& g, double tol = kDefaultTol);

ClassificationReport classify(const QuadraticGame& g, double tol = kDefaultTol);

// Payoff -f(x, y) with y as the minimizing player; coordinates come out as (y, x).
QuadraticGame mirror(const QuadraticGame& g);

enum class EnvelopeKind { Upper, Lower };

// Exact max (Upper, over |y - center| <= eps) or min (Lower, over |x - center| <= eps)
// for a 1+1 dimensional game, evaluated at `point` on the other side.
double envelope_1d(const QuadraticGame& g, EnvelopeKind kind, double eps, double point,
                   double center = 0.0);

// max_y q(x, y): finite exactly on {x : L'x = rhs} when B <= 0, where it equals
// 1/2 x'Qx + linear'x + constant with Q = A - C B^+ C'.
struct UpperEnvelope {
  bool finite_somewhere = false;
  Mat domain_normal;  // L = C P_B, n x m
  Vec domain_rhs;     // -P_B b
  Mat quad;
  Vec linear;
  double constant = 0.0;

  bool in_domain(const Vec& x, double tol = 1e-9) const;
  double value(const Vec& x) const;  // +inf off the domain
};

UpperEnvelope upper_envelope_quadratic(const QuadraticGame& g, double tol = kDefaultTol);

}  // namespace quadratic
}  // namespace minimaxlab
