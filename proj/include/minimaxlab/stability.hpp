#pragma once

#include "minimaxlab/dynamics.hpp"
#include "minimaxlab/oracle.hpp"
#include "minimaxlab/quadratic.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace minimaxlab {

// H = [[-a1 f_xx, -a1 f_xy], [a2 f_yx, a2 f_yy]]: Jacobian of the vector field.
struct JacobianH {
  Mat H;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  Vec point;
  std::string label;
};

// Stability region of one algorithm in the lambda-plane. `limit` selects beta -> inf for EG
// and k -> 1+ for OGD.
struct RegionSpec {
  Family family = Family::GDA;
  double param = 0.0;
  bool limit = false;

  std::string label() const;
  static RegionSpec from_algorithm(const AlgorithmSpec& spec);
};

struct PredicateResult {
  bool stable = false;
  double margin = 0.0;  // > 0 inside; smallest slack among the defining inequalities
};

enum class VerdictMethod { Predicate, AugmentedJacobian, Both };

const char* to_string(VerdictMethod m);

struct StabilityVerdict {
  CVec eigenvalues;                         // of H
  std::vector<bool> per_eigenvalue_pass;    // simultaneous mode only
  std::vector<bool> marginal_flags;         // per eigenvalue, simultaneous mode only
  std::vector<double> char_poly;            // alternating mode: characteristic determinant, leading first
  bool predicate_stable = false;
  bool stable = false;
  double spectral_radius_of_update = 0.0;
  VerdictMethod method = VerdictMethod::Both;
  bool agreement = true;
  bool marginal = false;
  std::vector<std::string> warnings;
};

namespace stability {

inline constexpr double kBoundaryBand = 1e-6;

JacobianH jacobian_H(const GameOracle& f, const Vec& x, const Vec& y, double alpha1, double alpha2);

// Roots of a0 x^n + ... + an strictly inside the unit disc (Schur-Cohn determinants).
bool schur_real(const std::vector<double>& coeffs);
// Roots of x^2 + a x + b strictly inside the unit disc.
bool schur_complex_quadratic(Complex a, Complex b);

bool stable_gda(Complex lambda);
bool stable_eg(Complex lambda, double beta);
bool stable_eg_limit(Complex lambda);
bool stable_ogd(Complex lambda, double k);
bool stable_ogd_limit(Complex lambda);
bool stable_hb(Complex lambda, double beta);
bool stable_nag(Complex lambda, double beta);

PredicateResult region_predicate(const RegionSpec& region, Complex lambda);

// Characteristic polynomial (leading first) of the scalar recurrence the algorithm
// induces on one eigen-direction with eigenvalue lambda. Empty for limit regions.
std::vector<Complex> family_char_poly(const RegionSpec& region, Complex lambda);
// Largest root modulus of family_char_poly, via companion-matrix eigenvalues.
double family_root_radius(const RegionSpec& region, Complex lambda);

// Real update Jacobian of the algorithm at a linear vector field with Jacobian H.
Mat augmented_jacobian(const AlgorithmSpec& spec, const Mat& H, Eigen::Index x_dim);

// det((l-1)I - M(l)) for alternating GDA, det((l-1)l I - (kl-1)M(l)) for alternating OGD,
// with M(l) = [[H11, H12], [l H21, H22]]; coefficients leading first.
std::vector<double> alternating_char_poly(const AlgorithmSpec& spec, const Mat& H, Eigen::Index x_dim);

StabilityVerdict exponential_stability(const AlgorithmSpec& spec, const Mat& H, Eigen::Index x_dim);
StabilityVerdict exponential_stability(const AlgorithmSpec& spec, const GameOracle& f, const Vec& x, const Vec& y);

struct Window {
  double re_min = -2.5;
  double re_max = 0.5;
  double im_min = -1.5;
  double im_max = 1.5;
};

struct RegionRaster {
  RegionSpec region;
  Window window;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> stable;    // row-major, row j = imaginary index
  std::vector<std::uint8_t> marginal;

  Complex lambda_at(int i, int j) const;
  bool at(int i, int j) const { return stable[static_cast<std::size_t>(j) * nx + i] != 0; }
  bool marginal_at(int i, int j) const { return marginal[static_cast<std::size_t>(j) * nx + i] != 0; }
  // Pixel nearest to lambda.
  std::pair<int, int> pixel_of(Complex lambda) const;
};

RegionRaster region_raster(const RegionSpec& region, const Window& window, int nx, int ny, int threads = 1);

void write_region_csv(std::ostream& os, const std::vector<RegionRaster>& rasters,
                      const std::vector<std::string>& column_names);

struct NestingReport {
  bool ok = true;
  int checked = 0;
  int skipped_marginal = 0;
  std::vector<Complex> counterexamples;
};

// Samples lambda uniformly in the window and checks inner region => outer region.
NestingReport region_inclusion(const RegionSpec& inner, const RegionSpec& outer, int sample_count,
                               std::uint64_t seed = 42, const Window& window = {-3.0, 1.0, -2.0, 2.0},
                               double max_modulus = 0.0);

// EG pairs are (beta1, beta2) with beta1 > beta2: EG(beta2) inside EG(beta1).
// OGD pairs are (k1, k2) with k1 > k2: OGD(k1) inside OGD(k2).
NestingReport nesting_check(Family family, const std::vector<std::pair<double, double>>& param_pairs,
                            int sample_count, std::uint64_t seed = 42);

struct SaddleSpectrumReport {
  CVec eigenvalues;
  double max_real = 0.0;
  bool saddle_consistent = false;  // max_real <= tol
};

SaddleSpectrumReport saddle_spectrum_check(const GameOracle& f, const Vec& x, const Vec& y, double alpha1,
                                           double alpha2, double tol = 1e-9);

// 1+1 games whose H_{alpha1, alpha2} has the target among its eigenvalues; the first has a
// local saddle at the origin (needs Re(target) <= 0), the second a local minimax point.
QuadraticGame construct_saddle_game(Complex target, double alpha1, double alpha2);
QuadraticGame construct_minimax_game(Complex target, double alpha1, double alpha2);

struct TwoTimescaleResult {
  double gamma0 = 0.0;
  double alpha0 = 0.0;
};

// Throws NotApplicable unless the point passes the strict second-order test, NotFound when
// no grid corner is stable for both EG(beta=1) and OGD(k=2).
TwoTimescaleResult strict_minimax_two_timescale_search(const GameOracle& f, const Vec& x, const Vec& y,
                                                       std::vector<double> gamma_grid,
                                                       std::vector<double> alpha_grid);

}  // namespace stability
}  // namespace minimaxlab
