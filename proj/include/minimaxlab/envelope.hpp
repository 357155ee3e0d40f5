#pragma once

#include "minimaxlab/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace minimaxlab {

enum class Shape { L2Ball, LInfBall, Eigenspace };

const char* to_string(Shape s);

// {center + axes * c : |c| <= radius} in the L2 or Linf sense; Eigenspace is a box whose
// axes are the eigenvectors of a reference symmetric matrix.
struct Neighborhood {
  Vec center;
  double radius = 0.0;
  Shape shape = Shape::LInfBall;
  Mat axes;  // orthonormal columns; identity unless Eigenspace

  static Neighborhood linf(Vec center, double radius);
  static Neighborhood l2(Vec center, double radius);
  static Neighborhood eigenspace(Vec center, double radius, const Mat& reference);
  static Neighborhood of_shape(Shape shape, Vec center, double radius, const Mat& reference = Mat());

  Eigen::Index dim() const { return center.size(); }
  Vec to_local(const Vec& y) const;
  Vec from_local(const Vec& c) const;
  Vec project_local(const Vec& c) const;
  bool contains(const Vec& y, double tol = 1e-12) const;
};

struct EnvelopeConfig {
  int grid_1d = 401;        // points per axis when the inner variable is 1-dimensional
  int grid_2d = 101;        // points per axis when it is 2-dimensional
  int ascent_steps = 50;
  double ascent_step = 0.1;  // first step length as a fraction of the radius
  int restarts = 8;
  double active_tol = 1e-12;  // relative to 1 + |envelope value|
  double dedup = 1e-9;
  int x_samples = 96;        // x-ball samples per envelope test
  int ball_samples = 256;    // samples for the local-maximizer test
  double verify_tol = 1e-9;  // relative to 1 + |f|
  std::uint64_t seed = 42;
};

struct InnerMax {
  double value = 0.0;
  Vec argmax;
};

// max of f(x, .) over nbhd; a lower bound on the exact max (every candidate is feasible).
InnerMax inner_max(const GameOracle& f, const Vec& x, const Neighborhood& nbhd, const EnvelopeConfig& cfg = {});
double local_envelope(const GameOracle& f, const Vec& x, const Neighborhood& nbhd, const EnvelopeConfig& cfg = {});

struct ActiveSetSample {
  std::vector<Vec> points;
  std::vector<double> values;
  double tolerance = 0.0;
};

ActiveSetSample active_set(const GameOracle& f, const Vec& x_star, const Neighborhood& nbhd,
                           const EnvelopeConfig& cfg = {});

double danskin_dd(const GameOracle& f, const Vec& x_star, const Neighborhood& nbhd, const Vec& t,
                  const EnvelopeConfig& cfg = {});

// Unit directions: {+1, -1} in 1D, `count` equally spaced angles in 2D, seeded random otherwise.
std::vector<Vec> direction_grid(Eigen::Index dim, int count = 64, std::uint64_t seed = 42);

struct CriticalPartition {
  std::vector<Vec> positive;
  std::vector<Vec> critical;
  std::vector<std::vector<double>> dd;  // per direction (input order), per eps (input order)
  bool monotone = true;                 // dd nondecreasing in eps for every direction
};

// Throws NotLocalMax if y_star does not numerically maximize f(x_star, .).
CriticalPartition critical_directions(const GameOracle& f, const Vec& x_star, const Vec& y_star,
                                      const std::vector<double>& eps_list, const std::vector<Vec>& directions,
                                      double tol = 1e-5, Shape shape = Shape::LInfBall,
                                      const EnvelopeConfig& cfg = {});

struct ShellConfig {
  int shells = 6;
  double first_radius = 1e-1;
  double ratio = 1e-1;
  int angles = 64;
  int finest = 2;  // shells entering the reported max
  double scale = 1.0;
};

double second_order_necessary_term(const GameOracle& f, const Vec& x_star, const Vec& y_star, const Vec& t,
                                   const ShellConfig& shells = {});

enum class Verdict { Yes, No, Inconclusive };

const char* to_string(Verdict v);

struct Evidence {
  std::string stage;  // which check produced the verdict
  double eps = 0.0;
  double margin = 0.0;  // worst observed (candidate - reference) in the direction that must be >= 0
  Vec witness_x;
  Vec witness_y;
  std::vector<std::string> notes;
};

struct VerifyResult {
  Verdict verdict = Verdict::Inconclusive;
  Evidence evidence;
};

// y_star maximizes f(x_star, .) over a sampled box of the given radius.
VerifyResult local_max_test(const GameOracle& f, const Vec& x_star, const Vec& y_star, double radius,
                            const EnvelopeConfig& cfg = {});

// x_star minimizes the eps-envelope over a sampled x-box of radius x_radius.
VerifyResult envelope_min_test(const GameOracle& f, const Vec& x_star, const Vec& y_star, double eps,
                               double x_radius, Shape shape = Shape::LInfBall, const EnvelopeConfig& cfg = {},
                               const Mat& y_reference = Mat());

VerifyResult verify_local_minimax(const GameOracle& f, const Vec& x_star, const Vec& y_star,
                                  const std::vector<double>& eps_list, double x_radius,
                                  const EnvelopeConfig& cfg = {});

struct LrpOptions {
  double x_radius = 0.05;
  double y_radius = 0.05;
  Shape shape = Shape::LInfBall;
  Mat x_reference;  // for Eigenspace shape: A-side reference (x neighborhoods)
  Mat y_reference;  // B-side reference (y neighborhoods)
};

VerifyResult verify_lrp(const OraclePtr& f, const Vec& x_star, const Vec& y_star, const std::vector<double>& eps_list,
                        const std::vector<double>& delta_list, const LrpOptions& opts = {},
                        const EnvelopeConfig& cfg = {});

// Global minimax / maximin of a 1+1 game on a square box by exhaustive grid search.
struct GridGlobalResult {
  double minimax_value = 0.0;
  std::vector<double> minimax_x;  // all grid x attaining the min of the upper envelope (within tol)
  double maximin_value = 0.0;
  std::vector<std::pair<double, double>> maximin_points;  // (x, y) pairs
};

GridGlobalResult grid_global_1d(const GameOracle& f, double lo, double hi, double step, double tol = 1e-9);

}  // namespace minimaxlab
