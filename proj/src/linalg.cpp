#include "minimaxlab/linalg.hpp"

#include "minimaxlab/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>

namespace minimaxlab::linalg {

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "PositiveDefinite";
    case Definiteness::PositiveSemi: return "PositiveSemi";
    case Definiteness::Indefinite: return "Indefinite";
    case Definiteness::NegativeSemi: return "NegativeSemi";
    case Definiteness::NegativeDefinite: return "NegativeDefinite";
    case Definiteness::Zero: return "Zero";
  }
  return "?";
}

bool is_psd(Definiteness d) {
  return d == Definiteness::PositiveDefinite || d == Definiteness::PositiveSemi ||
         d == Definiteness::Zero;
}

bool is_nsd(Definiteness d) {
  return d == Definiteness::NegativeDefinite || d == Definiteness::NegativeSemi ||
         d == Definiteness::Zero;
}

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, what);
}

SpectralDecomp sym_eig(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "sym_eig needs a nonempty square matrix");
  require_finite(m, "sym_eig input");
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "symmetric eigensolver");
  // Eigen returns ascending order; flip to descending.
  SpectralDecomp out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

namespace {

double cutoff(double tol, double largest) { return tol * std::max(1.0, largest); }

}  // namespace

Mat pinv(const Mat& m, double tol) {
  require_finite(m, "pinv input");
  if (m.size() == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cut = cutoff(tol, s.size() ? s(0) : 0.0);
  Vec inv = Vec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Mat null_projector(const Mat& l, double tol) {
  if (l.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "null_projector needs rows");
  Mat p = Mat::Identity(l.rows(), l.rows()) - l * pinv(l, tol);
  return 0.5 * (p + p.transpose());
}

std::pair<Mat, Mat> pos_neg_parts(const Mat& s, double tol) {
  const SpectralDecomp d = sym_eig(s);
  const double cut = cutoff(tol, d.eigenvalues.cwiseAbs().maxCoeff());
  Vec pos = Vec::Zero(d.eigenvalues.size());
  Vec neg = Vec::Zero(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    if (d.eigenvalues(i) > cut) pos(i) = d.eigenvalues(i);
    if (d.eigenvalues(i) < -cut) neg(i) = d.eigenvalues(i);
  }
  const Mat& u = d.eigenvectors;
  return {u * pos.asDiagonal() * u.transpose(), u * neg.asDiagonal() * u.transpose()};
}

Definiteness definiteness(const Mat& s, double tol) {
  const Vec ev = sym_eig(s).eigenvalues;
  const double hi = ev(0);
  const double lo = ev(ev.size() - 1);
  if (std::max(std::abs(hi), std::abs(lo)) <= tol) return Definiteness::Zero;
  if (lo > tol) return Definiteness::PositiveDefinite;
  if (lo >= -tol) return Definiteness::PositiveSemi;
  if (hi < -tol) return Definiteness::NegativeDefinite;
  if (hi <= tol) return Definiteness::NegativeSemi;
  return Definiteness::Indefinite;
}

bool in_range(const Mat& m, const Vec& v, double tol) {
  if (v.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "in_range: dim(v) != rows(M)");
  require_finite(v, "in_range vector");
  const Vec resid = v - m * (pinv(m, tol) * v);
  return resid.norm() <= tol * (1.0 + v.norm());
}

Mat null_basis(const Mat& m, double tol) {
  require_finite(m, "null_basis input");
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cut = cutoff(tol, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

CVec general_eig(const Mat& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "general_eig needs square input");
  require_finite(m, "general_eig input");
  if (m.rows() == 0) return CVec();
  Eigen::EigenSolver<Mat> es(m, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "Hessenberg QR iteration");
  CVec ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return ev;
}

double spectral_radius(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  return general_eig(m).cwiseAbs().maxCoeff();
}

CVec poly_roots(const std::vector<Complex>& coeffs) {
  if (coeffs.empty() || coeffs.front() == Complex(0.0))
    throw Error(ErrorKind::DegeneratePolynomial, "leading coefficient is zero");
  const Eigen::Index n = static_cast<Eigen::Index>(coeffs.size()) - 1;
  if (n == 0) return CVec();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) comp(0, j) = -coeffs[j + 1] / coeffs[0];
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  if (!comp.allFinite()) throw Error(ErrorKind::NonFinite, "polynomial coefficients");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "companion eigenvalues");
  return es.eigenvalues();
}

CVec poly_roots(const std::vector<double>& coeffs) {
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  return poly_roots(c);
}

}  // namespace minimaxlab::linalg
