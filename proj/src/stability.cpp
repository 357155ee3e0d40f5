#include "minimaxlab/stability.hpp"

#include "minimaxlab/error.hpp"
#include "minimaxlab/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace minimaxlab {

namespace {

std::string format_param(double p) {
  std::ostringstream os;
  os << std::setprecision(6) << p;
  return os.str();
}

}  // namespace

std::string RegionSpec::label() const {
  switch (family) {
    case Family::GDA: return "gda";
    case Family::HB: return "hb_b" + format_param(param);
    case Family::NAG: return "nag_b" + format_param(param);
    case Family::EG: return limit ? "eg_binf" : "eg_b" + format_param(param);
    case Family::PastEG: return "pasteg_b" + format_param(param);
    case Family::OGD: return limit ? "ogd_k1+" : "ogd_k" + format_param(param);
  }
  return "?";
}

RegionSpec RegionSpec::from_algorithm(const AlgorithmSpec& spec) {
  RegionSpec r;
  r.family = spec.family;
  switch (spec.family) {
    case Family::GDA: break;
    case Family::HB:
    case Family::NAG:
    case Family::EG: r.param = spec.beta; break;
    case Family::PastEG:
      r.family = Family::OGD;
      r.param = dynamics::ogd_from_past_eg(spec.beta);
      break;
    case Family::OGD: r.param = spec.k; break;
  }
  return r;
}

const char* to_string(VerdictMethod m) {
  switch (m) {
    case VerdictMethod::Predicate: return "predicate";
    case VerdictMethod::AugmentedJacobian: return "augmented_jacobian";
    case VerdictMethod::Both: return "both";
  }
  return "?";
}

namespace stability {

JacobianH jacobian_H(const GameOracle& f, const Vec& x, const Vec& y, double alpha1, double alpha2) {
  if (x.size() != f.x_dim() || y.size() != f.y_dim())
    throw Error(ErrorKind::DimensionMismatch, "point does not match the oracle");
  const Eigen::Index n = x.size(), m = y.size();
  const Mat cross = f.hess_xy(x, y);
  JacobianH out;
  out.H.resize(n + m, n + m);
  out.H.topLeftCorner(n, n) = -alpha1 * f.hess_xx(x, y);
  out.H.topRightCorner(n, m) = -alpha1 * cross;
  out.H.bottomLeftCorner(m, n) = alpha2 * cross.transpose();
  out.H.bottomRightCorner(m, m) = alpha2 * f.hess_yy(x, y);
  linalg::require_finite(out.H, "Jacobian");
  out.alpha1 = alpha1;
  out.alpha2 = alpha2;
  out.point = join(x, y);
  out.label = f.label();
  return out;
}

bool schur_real(const std::vector<double>& coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0)
    throw Error(ErrorKind::DegeneratePolynomial, "leading coefficient is zero");
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> a(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) a[i] = coeffs[i] / coeffs.front();
  for (int k = 1; k <= n; ++k) {
    Mat p = Mat::Zero(k, k), q = Mat::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i >= j) p(i, j) = a[i - j];
        if (i <= j) q(i, j) = a[n - j + i];
      }
    }
    if (!((p * p.transpose() - q.transpose() * q).determinant() > 0.0)) return false;
  }
  return true;
}

bool schur_complex_quadratic(Complex a, Complex b) {
  const double b2 = std::norm(b);
  if (!(b2 < 1.0)) return false;
  return (1.0 - b2) * (1.0 - b2) + 2.0 * std::real(a * a * std::conj(b)) > std::norm(a) * (1.0 + b2);
}

PredicateResult region_predicate(const RegionSpec& region, Complex lambda) {
  const double u = lambda.real(), v = lambda.imag();
  const double mod2 = std::norm(lambda);
  double margin = 0.0;
  switch (region.family) {
    case Family::GDA:
      margin = 1.0 - std::abs(1.0 + lambda);
      break;
    case Family::EG:
      if (region.limit) {
        margin = -std::real(lambda + lambda * lambda);
      } else {
        if (!(region.param > 0.0)) throw Error(ErrorKind::NonPositiveBeta, "EG ratio must be positive");
        margin = 1.0 - std::abs(1.0 + (lambda + lambda * lambda) / region.param);
      }
      break;
    case Family::PastEG:
      return region_predicate({Family::OGD, dynamics::ogd_from_past_eg(region.param), false}, lambda);
    case Family::OGD:
      if (region.limit) {
        margin = std::min(1.0 - std::sqrt(mod2), std::abs(lambda - 0.5) - 0.5);
      } else {
        const double k = region.param;
        if (!(k > 1.0)) throw Error(ErrorKind::InvalidSpec, "OGD needs k > 1");
        margin = std::min(1.0 - std::sqrt(mod2), 2.0 * u * (k * mod2 - 1.0) - mod2 * (k - 3.0 + (k + 1.0) * mod2));
      }
      break;
    case Family::HB: {
      const double beta = region.param;
      if (!(std::abs(beta) < 1.0)) {
        margin = 1.0 - std::abs(beta);
        break;
      }
      const double ellipse = (u + beta + 1.0) * (u + beta + 1.0) / ((beta + 1.0) * (beta + 1.0)) +
                             v * v / ((beta - 1.0) * (beta - 1.0));
      margin = std::min(1.0 - std::abs(beta), 1.0 - ellipse);
      break;
    }
    case Family::NAG: {
      const double beta = region.param;
      const double shifted = std::abs(1.0 + lambda);
      const double lhs = shifted > 0.0 ? 1.0 / (shifted * shifted) : std::numeric_limits<double>::infinity();
      const double rhs = 1.0 + 2.0 * beta * (beta * beta - beta - 1.0) * u + beta * beta * mod2 * (1.0 + 2.0 * beta);
      margin = std::min(lhs - rhs, 1.0 - std::abs(beta) * shifted);
      break;
    }
  }
  return {margin > 0.0, margin};
}

bool stable_gda(Complex lambda) { return region_predicate({Family::GDA, 0.0, false}, lambda).stable; }
bool stable_eg(Complex lambda, double beta) { return region_predicate({Family::EG, beta, false}, lambda).stable; }
bool stable_eg_limit(Complex lambda) { return region_predicate({Family::EG, 0.0, true}, lambda).stable; }
bool stable_ogd(Complex lambda, double k) { return region_predicate({Family::OGD, k, false}, lambda).stable; }
bool stable_ogd_limit(Complex lambda) { return region_predicate({Family::OGD, 1.0, true}, lambda).stable; }
bool stable_hb(Complex lambda, double beta) { return region_predicate({Family::HB, beta, false}, lambda).stable; }
bool stable_nag(Complex lambda, double beta) { return region_predicate({Family::NAG, beta, false}, lambda).stable; }

std::vector<Complex> family_char_poly(const RegionSpec& region, Complex lambda) {
  if (region.limit) return {};
  const Complex one(1.0, 0.0);
  const double p = region.param;
  switch (region.family) {
    case Family::GDA: return {one, -(one + lambda)};
    case Family::EG: return {one, -(one + (lambda + lambda * lambda) / p)};
    case Family::PastEG:
      return family_char_poly({Family::OGD, dynamics::ogd_from_past_eg(p), false}, lambda);
    case Family::OGD: return {one, -(one + p * lambda), lambda};
    case Family::HB: return {one, -(p + 1.0 + lambda), Complex(p, 0.0)};
    case Family::NAG: return {one, -(1.0 + p) * (one + lambda), p * (one + lambda)};
  }
  return {};
}

double family_root_radius(const RegionSpec& region, Complex lambda) {
  const auto poly = family_char_poly(region, lambda);
  if (poly.empty()) throw Error(ErrorKind::InvalidSpec, "limit regions have no finite recurrence");
  const CVec roots = linalg::poly_roots(poly);
  double r = 0.0;
  for (Eigen::Index i = 0; i < roots.size(); ++i) r = std::max(r, std::abs(roots(i)));
  return r;
}

Mat augmented_jacobian(const AlgorithmSpec& spec, const Mat& H, Eigen::Index x_dim) {
  const Eigen::Index d = H.rows();
  if (H.cols() != d || x_dim < 0 || x_dim > d) throw Error(ErrorKind::DimensionMismatch, "H must be square");
  const Mat id = Mat::Identity(d, d);
  auto two_step = [&](const Mat& top_left, const Mat& top_right, const Mat& bottom_left, const Mat& bottom_right) {
    Mat j(2 * d, 2 * d);
    j << top_left, top_right, bottom_left, bottom_right;
    return j;
  };
  const Mat zero = Mat::Zero(d, d);

  if (spec.mode == UpdateMode::Alternating) {
    const Eigen::Index n = x_dim, m = d - x_dim;
    const Mat h11 = H.topLeftCorner(n, n), h12 = H.topRightCorner(n, m);
    const Mat h21 = H.bottomLeftCorner(m, n), h22 = H.bottomRightCorner(m, m);
    const Mat in = Mat::Identity(n, n), im = Mat::Identity(m, m);
    if (spec.family == Family::GDA) {
      Mat j(d, d);
      j << in + h11, h12, h21 * (in + h11), im + h22 + h21 * h12;
      return j;
    }
    // state (x_t, y_t, x_{t-1}, y_{t-1})
    const double k = spec.k;
    Mat x_row(n, 2 * d);
    x_row << in + k * h11, k * h12, -h11, -h12;
    Mat y_own(m, 2 * d);
    y_own << -h21, im + k * h22, Mat::Zero(m, n), -h22;
    const Mat y_row = k * h21 * x_row + y_own;
    Mat j = Mat::Zero(2 * d, 2 * d);
    j.topRows(n) = x_row;
    j.middleRows(n, m) = y_row;
    j.bottomLeftCorner(d, d) = id;
    return j;
  }

  switch (spec.family) {
    case Family::GDA: return id + H;
    case Family::EG: return id + H / spec.beta + H * H / spec.beta;
    case Family::HB: return two_step((1.0 + spec.beta) * id + H, -spec.beta * id, id, zero);
    case Family::NAG: return two_step((1.0 + spec.beta) * (id + H), -spec.beta * (id + H), id, zero);
    case Family::OGD: return two_step(id + spec.k * H, -H, id, zero);
    case Family::PastEG: return two_step(id + H / spec.beta, H * H / spec.beta, id, H);  // state (z_t, z_{t-1/2})
  }
  return id;
}

std::vector<double> alternating_char_poly(const AlgorithmSpec& spec, const Mat& H, Eigen::Index x_dim) {
  const Eigen::Index d = H.rows();
  if (H.cols() != d || x_dim < 0 || x_dim > d) throw Error(ErrorKind::DimensionMismatch, "H must be square");
  const Eigen::Index n = x_dim, m = d - x_dim;
  const bool ogd = spec.family == Family::OGD;
  if (!ogd && spec.family != Family::GDA)
    throw Error(ErrorKind::InvalidSpec, "alternating updates exist for GDA and OGD only");
  const int degree = static_cast<int>(ogd ? 2 * d : d);
  const int samples = degree + 1;

  auto det_at = [&](Complex l) {
    Eigen::MatrixXcd mm = H.cast<Complex>();
    mm.bottomLeftCorner(m, n) *= l;
    Eigen::MatrixXcd dm = -(ogd ? (spec.k * l - 1.0) : Complex(1.0)) * mm;
    const Complex diag = ogd ? (l - 1.0) * l : l - 1.0;
    dm.diagonal().array() += diag;
    return dm.determinant();
  };

  // p(w_j) = sum_k c_k w_j^k with w_j the roots of unity; invert the DFT.
  std::vector<Complex> values(samples);
  for (int j = 0; j < samples; ++j)
    values[j] = det_at(std::polar(1.0, 2.0 * std::numbers::pi * j / samples));
  std::vector<double> ascending(samples);
  for (int k = 0; k < samples; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < samples; ++j) acc += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / samples);
    ascending[k] = acc.real() / samples;
  }
  return {ascending.rbegin(), ascending.rend()};
}

StabilityVerdict exponential_stability(const AlgorithmSpec& spec, const Mat& H, Eigen::Index x_dim) {
  spec.validate();
  linalg::require_finite(H, "Jacobian");
  StabilityVerdict out;
  out.method = VerdictMethod::Both;
  out.eigenvalues = linalg::general_eig(H);
  out.spectral_radius_of_update = linalg::spectral_radius(augmented_jacobian(spec, H, x_dim));
  const bool radius_marginal = std::abs(out.spectral_radius_of_update - 1.0) <= kBoundaryBand;

  if (spec.mode == UpdateMode::Alternating) {
    out.char_poly = alternating_char_poly(spec, H, x_dim);
    out.predicate_stable = schur_real(out.char_poly);
    const CVec roots = linalg::poly_roots(out.char_poly);
    double root_radius = 0.0;
    for (Eigen::Index i = 0; i < roots.size(); ++i) root_radius = std::max(root_radius, std::abs(roots(i)));
    out.marginal = radius_marginal || std::abs(root_radius - 1.0) <= kBoundaryBand;
  } else {
    const RegionSpec region = RegionSpec::from_algorithm(spec);
    out.predicate_stable = true;
    for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
      const PredicateResult r = region_predicate(region, out.eigenvalues(i));
      const bool marginal = std::abs(r.margin) <= kBoundaryBand;
      out.per_eigenvalue_pass.push_back(r.stable);
      out.marginal_flags.push_back(marginal);
      out.predicate_stable = out.predicate_stable && r.stable;
      out.marginal = out.marginal || marginal;
    }
    out.marginal = out.marginal || radius_marginal;
  }

  const bool radius_stable = out.spectral_radius_of_update < 1.0;
  out.stable = out.predicate_stable;
  out.agreement = out.predicate_stable == radius_stable || out.marginal;
  if (out.marginal) out.warnings.push_back("eigenvalue within the boundary band; verdict is marginal");
  if (out.predicate_stable != radius_stable && !out.marginal)
    out.warnings.push_back("predicate and update-matrix spectral radius disagree");
  return out;
}

StabilityVerdict exponential_stability(const AlgorithmSpec& spec, const GameOracle& f, const Vec& x, const Vec& y) {
  spec.validate();
  const JacobianH jac = jacobian_H(f, x, y, spec.alpha1, spec.alpha2);
  return exponential_stability(spec, jac.H, x.size());
}

Complex RegionRaster::lambda_at(int i, int j) const {
  const double re = nx > 1 ? window.re_min + (window.re_max - window.re_min) * i / (nx - 1) : window.re_min;
  const double im = ny > 1 ? window.im_min + (window.im_max - window.im_min) * j / (ny - 1) : window.im_min;
  return {re, im};
}

std::pair<int, int> RegionRaster::pixel_of(Complex lambda) const {
  auto index = [](double value, double lo, double hi, int count) {
    if (count <= 1) return 0;
    const long i = std::lround((value - lo) / (hi - lo) * (count - 1));
    return static_cast<int>(std::clamp<long>(i, 0, count - 1));
  };
  return {index(lambda.real(), window.re_min, window.re_max, nx), index(lambda.imag(), window.im_min, window.im_max, ny)};
}

RegionRaster region_raster(const RegionSpec& region, const Window& window, int nx, int ny, int threads) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidSpec, "raster needs at least one pixel per axis");
  if (!(window.re_max > window.re_min) || !(window.im_max > window.im_min))
    throw Error(ErrorKind::InvalidSpec, "empty raster window");
  RegionRaster out;
  out.region = region;
  out.window = window;
  out.nx = nx;
  out.ny = ny;
  const std::size_t total = static_cast<std::size_t>(nx) * ny;
  out.stable.assign(total, 0);
  out.marginal.assign(total, 0);
  region_predicate(region, {0.0, 0.0});  // validates parameters before spawning workers

  auto rows = [&](int first, int stride) {
    for (int j = first; j < ny; j += stride) {
      for (int i = 0; i < nx; ++i) {
        const PredicateResult r = region_predicate(region, out.lambda_at(i, j));
        const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
        out.stable[idx] = r.stable ? 1 : 0;
        out.marginal[idx] = std::abs(r.margin) <= kBoundaryBand ? 1 : 0;
      }
    }
  };
  const int workers = std::clamp(threads, 1, ny);
  if (workers == 1) {
    rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(rows, w, workers);
  }
  return out;
}

void write_region_csv(std::ostream& os, const std::vector<RegionRaster>& rasters,
                      const std::vector<std::string>& column_names) {
  if (rasters.empty()) throw Error(ErrorKind::InvalidSpec, "no rasters to write");
  if (column_names.size() != rasters.size()) throw Error(ErrorKind::DimensionMismatch, "one column name per raster");
  const RegionRaster& first = rasters.front();
  for (const auto& r : rasters)
    if (r.nx != first.nx || r.ny != first.ny) throw Error(ErrorKind::DimensionMismatch, "rasters differ in size");
  os << "re,im";
  for (const auto& name : column_names) os << ',' << name;
  os << '\n' << std::setprecision(17);
  for (int j = 0; j < first.ny; ++j) {
    for (int i = 0; i < first.nx; ++i) {
      const Complex l = first.lambda_at(i, j);
      os << l.real() << ',' << l.imag();
      for (const auto& r : rasters) os << ',' << (r.at(i, j) ? 1 : 0);
      os << '\n';
    }
  }
}

NestingReport region_inclusion(const RegionSpec& inner, const RegionSpec& outer, int sample_count,
                               std::uint64_t seed, const Window& window, double max_modulus) {
  NestingReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(window.re_min, window.re_max), im(window.im_min, window.im_max);
  for (int s = 0; s < sample_count; ++s) {
    const Complex lambda(re(rng), im(rng));
    if (max_modulus > 0.0 && std::abs(lambda) >= max_modulus) continue;
    const PredicateResult a = region_predicate(inner, lambda);
    const PredicateResult b = region_predicate(outer, lambda);
    if (std::abs(a.margin) <= kBoundaryBand || std::abs(b.margin) <= kBoundaryBand) {
      ++rep.skipped_marginal;
      continue;
    }
    ++rep.checked;
    if (a.stable && !b.stable) {
      rep.ok = false;
      rep.counterexamples.push_back(lambda);
    }
  }
  return rep;
}

NestingReport nesting_check(Family family, const std::vector<std::pair<double, double>>& param_pairs,
                            int sample_count, std::uint64_t seed) {
  if (family != Family::EG && family != Family::OGD)
    throw Error(ErrorKind::InvalidSpec, "nesting is defined for EG and OGD");
  NestingReport total;
  for (std::size_t p = 0; p < param_pairs.size(); ++p) {
    const auto [first, second] = param_pairs[p];
    if (!(first > second)) throw Error(ErrorKind::InvalidSpec, "pairs must be ordered (larger, smaller)");
    RegionSpec inner{family, 0.0, false}, outer{family, 0.0, false};
    if (family == Family::EG) {
      inner.param = second;
      outer.param = first;
    } else {
      inner.param = first;
      outer.param = second;
    }
    const NestingReport r = region_inclusion(inner, outer, sample_count, seed + p);
    total.ok = total.ok && r.ok;
    total.checked += r.checked;
    total.skipped_marginal += r.skipped_marginal;
    total.counterexamples.insert(total.counterexamples.end(), r.counterexamples.begin(), r.counterexamples.end());
  }
  return total;
}

SaddleSpectrumReport saddle_spectrum_check(const GameOracle& f, const Vec& x, const Vec& y, double alpha1,
                                           double alpha2, double tol) {
  SaddleSpectrumReport rep;
  rep.eigenvalues = linalg::general_eig(jacobian_H(f, x, y, alpha1, alpha2).H);
  rep.max_real = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i)
    rep.max_real = std::max(rep.max_real, rep.eigenvalues(i).real());
  rep.saddle_consistent = rep.max_real <= tol;
  return rep;
}

namespace {

void check_steps(double alpha1, double alpha2) {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2))
    throw Error(ErrorKind::InvalidSpec, "step sizes must be positive and finite");
}

QuadraticGame scalar_game(double a, double b, double c) {
  return QuadraticGame::homogeneous(Mat::Constant(1, 1, a), Mat::Constant(1, 1, b), Mat::Constant(1, 1, c));
}

}  // namespace

QuadraticGame construct_saddle_game(Complex target, double alpha1, double alpha2) {
  check_steps(alpha1, alpha2);
  if (target.real() > 0.0) throw Error(ErrorKind::NotApplicable, "saddle Jacobians have no eigenvalue with Re > 0");
  const double gamma = alpha2 / alpha1;
  const double u = -target.real() / alpha1;
  const double v = std::abs(target.imag()) / alpha1;
  return scalar_game(u, -u / gamma, v / std::sqrt(gamma));
}

QuadraticGame construct_minimax_game(Complex target, double alpha1, double alpha2) {
  check_steps(alpha1, alpha2);
  const double u = target.real(), v = target.imag();
  const double s = 1.0 + std::max(0.0, -2.0 * u / alpha2);
  const double b = -s;
  const double a = (alpha2 * b - 2.0 * u) / alpha1;
  const double c = std::sqrt((u * u + v * v) / (alpha1 * alpha2) + a * b);
  return scalar_game(a, b, c);
}

TwoTimescaleResult strict_minimax_two_timescale_search(const GameOracle& f, const Vec& x, const Vec& y,
                                                       std::vector<double> gamma_grid,
                                                       std::vector<double> alpha_grid) {
  if (gamma_grid.empty() || alpha_grid.empty()) throw Error(ErrorKind::InvalidSpec, "empty search grid");
  const SecondOrderReport second = optimality::second_order_invertible(f, x, y);
  if (second.verdict != SecondOrderVerdict::SufficientStrictLocalMinimax)
    throw Error(ErrorKind::NotApplicable, "point is not a strict local minimax point");
  std::sort(gamma_grid.begin(), gamma_grid.end());
  std::sort(alpha_grid.begin(), alpha_grid.end());
  const std::size_t ng = gamma_grid.size(), na = alpha_grid.size();

  std::vector<std::uint8_t> ok(ng * na, 0);
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t a = 0; a < na; ++a) {
      const double alpha2 = alpha_grid[a];
      const double alpha1 = alpha2 / gamma_grid[g];
      const CVec ev = linalg::general_eig(jacobian_H(f, x, y, alpha1, alpha2).H);
      bool stable = true;
      for (Eigen::Index i = 0; i < ev.size() && stable; ++i)
        stable = stable_eg(ev(i), 1.0) && stable_ogd(ev(i), 2.0);
      ok[g * na + a] = stable ? 1 : 0;
    }
  }

  // Largest alpha index whose lower-left block (alpha <= it) is stable on every gamma row >= g.
  for (std::size_t g = 0; g < ng; ++g) {
    std::size_t prefix = na;
    for (std::size_t gg = g; gg < ng && prefix > 0; ++gg) {
      std::size_t run = 0;
      while (run < prefix && ok[gg * na + run]) ++run;
      prefix = run;
    }
    if (prefix > 0) return {gamma_grid[g], alpha_grid[prefix - 1]};
  }
  throw Error(ErrorKind::NotFound, "no stable two-timescale corner on the grid");
}

}  // namespace stability
}  // namespace minimaxlab
