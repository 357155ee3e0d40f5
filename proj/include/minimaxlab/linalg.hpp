#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace minimaxlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

namespace linalg {

// Relative cutoff: values below tol * max(1, largest magnitude) count as zero.
inline constexpr double kRankTol = 1e-9;

struct SpectralDecomp {
  Vec eigenvalues;   // descending
  Mat eigenvectors;  // orthonormal columns, matching order
};

enum class Definiteness {
  PositiveDefinite,
  PositiveSemi,
  Indefinite,
  NegativeSemi,
  NegativeDefinite,
  Zero,
};

const char* to_string(Definiteness d);
bool is_psd(Definiteness d);
bool is_nsd(Definiteness d);

void require_finite(const Mat& m, const char* what);

// Symmetric eigendecomposition of the symmetrized input (M + M^T) / 2.
SpectralDecomp sym_eig(const Mat& m);

Mat pinv(const Mat& m, double tol = kRankTol);

// I - L L^+, the orthogonal projector onto null(L^T).
Mat null_projector(const Mat& l, double tol = kRankTol);

// Spectral truncations; eigenvalues with |lambda| <= tol land in neither part.
std::pair<Mat, Mat> pos_neg_parts(const Mat& s, double tol = kRankTol);

Definiteness definiteness(const Mat& s, double tol);

bool in_range(const Mat& m, const Vec& v, double tol = kRankTol);

// Orthonormal basis of null(M), columns; empty (cols()==0) when M is injective.
Mat null_basis(const Mat& m, double tol = kRankTol);

// Eigenvalues with multiplicity, sorted by (real, imag) descending.
CVec general_eig(const Mat& m);

double spectral_radius(const Mat& m);

// Roots of a0 x^n + a1 x^(n-1) + ... + an through the companion matrix.
CVec poly_roots(const std::vector<double>& coeffs);
CVec poly_roots(const std::vector<Complex>& coeffs);

}  // namespace linalg
}  // namespace minimaxlab
