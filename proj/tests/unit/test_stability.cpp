#include "minimaxlab/error.hpp"
#include "minimaxlab/fixtures.hpp"
#include "minimaxlab/optimality.hpp"
#include "minimaxlab/quadratic.hpp"
#include "minimaxlab/stability.hpp"

#include "../support/root_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace minimaxlab;
using namespace minimaxlab::stability;

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Mat s1(double v) { return Mat::Constant(1, 1, v); }

QuadraticOracle nls_oracle() { return QuadraticOracle(QuadraticGame::homogeneous(s1(-2), s1(0), s1(1))); }

// Characteristic polynomials written out independently of the library.
std::vector<cd> reference_poly(Family family, double param, cd lambda) {
  switch (family) {
    case Family::GDA: return {1.0, -(1.0 + lambda)};
    case Family::EG: return {1.0, -(1.0 + lambda / param + lambda * lambda / param)};
    case Family::OGD: return {1.0, -(1.0 + param * lambda), lambda};
    case Family::HB: return {1.0, -(param + 1.0 + lambda), param};
    case Family::NAG: return {1.0, -(1.0 + param) * (1.0 + lambda), param * (1.0 + lambda)};
    default: return {};
  }
}

double sample_param(Family family, std::mt19937_64& rng) {
  switch (family) {
    case Family::EG: return std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    case Family::OGD: return std::uniform_real_distribution<double>(1.0001, 4.0)(rng);
    case Family::HB:
    case Family::NAG: return std::uniform_real_distribution<double>(-1.2, 1.2)(rng);
    default: return 0.0;
  }
}

Mat random_sym(std::mt19937_64& rng, int n, double sign, bool allow_zero) {
  std::normal_distribution<double> g;
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = g(rng);
  const Eigen::HouseholderQR<Mat> qr(r);
  const Mat q = qr.householderQ();
  Vec d(n);
  for (int i = 0; i < n; ++i) {
    d(i) = std::abs(g(rng)) + 0.1;
    if (allow_zero && g(rng) > 0.5) d(i) = 0.0;
  }
  const Mat s = sign * q * d.asDiagonal() * q.transpose();
  return (s + s.transpose()) / 2.0;
}

Mat random_block(std::mt19937_64& rng, int n, int m) {
  std::normal_distribution<double> g;
  Mat c(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) c(i, j) = g(rng);
  return c;
}

double max_abs_root(const std::vector<double>& coeffs) {
  const CVec r = linalg::poly_roots(coeffs);
  double best = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) best = std::max(best, std::abs(r(i)));
  return best;
}

}  // namespace

TEST_CASE("jacobian_H examples") {
  const QuadraticOracle q = nls_oracle();
  const double gamma = 3.5;
  const Mat h = jacobian_H(q, Vec::Zero(1), Vec::Zero(1), 1.0, gamma).H;
  Mat expected(2, 2);
  expected << 2, -1, gamma, 0;
  CHECK((h - expected).norm() < 1e-15);

  Mat c(2, 1);
  c << 1.0, -2.0;
  const QuadraticOracle bil(QuadraticGame::homogeneous(Mat::Zero(2, 2), s1(0), c));
  const Mat hb = jacobian_H(bil, Vec::Zero(2), Vec::Zero(1), 0.3, 0.7).H;
  CHECK((hb.topRightCorner(2, 1) + 0.3 * c).norm() < 1e-15);
  CHECK((hb.bottomLeftCorner(1, 2) - 0.7 * c.transpose()).norm() < 1e-15);
  CHECK(hb.topLeftCorner(2, 2).norm() == 0.0);

  const QuadraticOracle zero(QuadraticGame::homogeneous(s1(0), s1(0), s1(0)));
  CHECK(jacobian_H(zero, Vec::Zero(1), Vec::Zero(1), 1, 1).H.norm() == 0.0);
  CHECK_THROWS_AS(jacobian_H(zero, Vec::Zero(2), Vec::Zero(1), 1, 1), Error);
}

TEST_CASE("schur_real examples") {
  CHECK(schur_real({1.0, -1.0, 0.25}));
  CHECK_FALSE(schur_real({1.0, -2.5, 1.0}));
  CHECK(schur_real({1.0, 0.0}));
  CHECK(schur_real({2.0, -1.0}));
  CHECK_FALSE(schur_real({1.0, -1.0}));
  CHECK_THROWS_AS(schur_real({0.0, 1.0}), Error);
}

TEST_CASE("schur_complex_quadratic examples") {
  CHECK(schur_complex_quadratic(0.0, 0.0));
  CHECK(schur_complex_quadratic(-1.0, 0.25));
  CHECK_FALSE(schur_complex_quadratic(-2.5, 1.0));
}

TEST_CASE("schur tests agree with root moduli") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> degree(1, 4);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), scale(0.2, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const int n = degree(rng);
    // Build from random roots half the time so both outcomes are frequent.
    std::vector<double> coeffs;
    if (trial % 2 == 0) {
      coeffs.assign(n + 1, 0.0);
      coeffs[0] = 1.0;
      for (int i = 1; i <= n; ++i) coeffs[i] = coef(rng);
    } else {
      std::vector<cd> poly = {1.0};
      int placed = 0;
      while (placed < n) {
        const double r = scale(rng), th = coef(rng) * 1.6;
        if (placed + 2 <= n && trial % 3 != 0) {
          const cd root = std::polar(r, th);
          const std::vector<cd> quad = {1.0, -2.0 * root.real(), std::norm(root)};
          std::vector<cd> next(poly.size() + 2, 0.0);
          for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t j = 0; j < 3; ++j) next[i + j] += poly[i] * quad[j];
          poly = next;
          placed += 2;
        } else {
          const double root = r * (coef(rng) > 0 ? 1.0 : -1.0);
          std::vector<cd> next(poly.size() + 1, 0.0);
          for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i] * root;
          }
          poly = next;
          ++placed;
        }
      }
      for (const cd& c : poly) coeffs.push_back(c.real() * 0.7);
    }
    const double radius = oracle::max_modulus(oracle::roots(coeffs));
    if (std::abs(radius - 1.0) <= 1e-6) continue;
    ++checked;
    CHECK(schur_real(coeffs) == (radius < 1.0));
    CHECK(std::abs(max_abs_root(coeffs) - radius) < 1e-6);
  }
  CHECK(checked > 19000);

  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const cd a{u(rng), u(rng)}, b{0.7 * u(rng), 0.7 * u(rng)};
    const double radius = oracle::max_modulus(oracle::roots(std::vector<cd>{1.0, a, b}));
    if (std::abs(radius - 1.0) <= 1e-6) continue;
    CHECK(schur_complex_quadratic(a, b) == (radius < 1.0));
  }
}

TEST_CASE("family predicate examples") {
  CHECK(stable_gda(-1.0));
  CHECK_FALSE(stable_gda(0.5 * kI));
  CHECK_FALSE(stable_gda(0.0));

  CHECK(stable_eg(-0.5, 1.0));
  CHECK(stable_eg(0.5 * kI, 1.0));
  CHECK_FALSE(stable_eg(1.0 + kI, 1.0));

  CHECK(stable_ogd(-0.5, 1.0001));
  CHECK_FALSE(stable_ogd(0.3, 1.0001));
  CHECK_FALSE(stable_ogd(0.1 * kI, 3.0));
  CHECK_FALSE(stable_ogd(0.1 * kI, 5.0));
  CHECK(stable_ogd_limit(-0.5));
  CHECK_FALSE(stable_ogd_limit(0.3));
  CHECK(stable_eg_limit(-0.5));
  CHECK_FALSE(stable_eg_limit(-1.5));

  CHECK(stable_hb(-1.0, 0.0));
  CHECK(stable_hb(-1.0, 0.5));
  for (double beta : {1.0, -1.0, 1.5}) CHECK_FALSE(stable_hb(-1.0, beta));

  for (double beta : {-0.5, 0.0, 0.4}) {
    CHECK_FALSE(stable_nag(0.0, beta));
    CHECK_FALSE(stable_nag(0.2 + 0.3 * kI, beta));
  }
  CHECK(stable_nag(-0.5, 0.0));
  const cd lam = -0.5 + 0.1 * kI;
  const double radius = oracle::max_modulus(oracle::roots(reference_poly(Family::NAG, 0.5, lam)));
  CHECK(stable_nag(lam, 0.5) == (radius < 1.0));
}

TEST_CASE("predicates agree with the Durand-Kerner root oracle") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(-3.0, 1.0), im(-2.0, 2.0);
  for (Family family : {Family::GDA, Family::HB, Family::NAG, Family::EG, Family::OGD}) {
    int disagreements = 0, banded = 0, stable = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const cd lambda{re(rng), im(rng)};
      const double param = sample_param(family, rng);
      const RegionSpec region{family, param, false};
      const PredicateResult pred = region_predicate(region, lambda);
      const double radius = oracle::max_modulus(oracle::roots(reference_poly(family, param, lambda)));
      // HB and NAG with |beta| >= 1 are rejected by their first inequality; the roots decide the rest.
      if (std::abs(pred.margin) <= kBoundaryBand || std::abs(radius - 1.0) <= kBoundaryBand) {
        ++banded;
        continue;
      }
      if (pred.stable != (radius < 1.0)) ++disagreements;
      if (pred.stable) ++stable;
      CHECK(std::abs(family_root_radius(region, lambda) - radius) < 1e-6);
    }
    CHECK_MESSAGE(disagreements == 0, to_string(family));
    CHECK_MESSAGE(stable > 200, to_string(family));
    CHECK(banded < 50);
  }
}

TEST_CASE("limit regions match large finite parameters away from the boundary") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> re(-2.0, 1.0), im(-1.5, 1.5);
  for (int trial = 0; trial < 5000; ++trial) {
    const cd lambda{re(rng), im(rng)};
    const PredicateResult eg_lim = region_predicate({Family::EG, 0.0, true}, lambda);
    const PredicateResult ogd_lim = region_predicate({Family::OGD, 0.0, true}, lambda);
    if (std::abs(eg_lim.margin) > 1e-3) CHECK(eg_lim.stable == stable_eg(lambda, 1e7));
    if (std::abs(ogd_lim.margin) > 1e-3) CHECK(ogd_lim.stable == stable_ogd(lambda, 1.0 + 1e-7));
  }
}

TEST_CASE("past extra-gradient regions coincide with OGD regions") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(-3.0, 1.0), im(-2.0, 2.0), b(0.2, 5.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const cd lambda{re(rng), im(rng)};
    const double beta = b(rng);
    CHECK(region_predicate({Family::PastEG, beta, false}, lambda).stable ==
          stable_ogd(lambda, dynamics::ogd_from_past_eg(beta)));
  }
}

TEST_CASE("region labels") {
  CHECK(RegionSpec{Family::GDA, 0.0, false}.label() == "gda");
  CHECK(RegionSpec{Family::EG, 0.0, true}.label() == "eg_binf");
  CHECK(RegionSpec{Family::OGD, 0.0, true}.label() == "ogd_k1+");
  AlgorithmSpec eg{Family::EG, 0.1, 0.1, 2.0};
  CHECK(RegionSpec::from_algorithm(eg).param == 2.0);
  CHECK_FALSE(RegionSpec::from_algorithm(eg).limit);
}

TEST_CASE("alternating characteristic polynomials match the closed forms") {
  const QuadraticOracle q = nls_oracle();
  for (double a1 : {0.05, 0.3, 0.9}) {
    for (double a2 : {0.2, 1.0, 3.0}) {
      const Mat h = jacobian_H(q, Vec::Zero(1), Vec::Zero(1), a1, a2).H;
      AlgorithmSpec gda{Family::GDA, a1, a2};
      gda.mode = UpdateMode::Alternating;
      std::vector<double> pg = alternating_char_poly(gda, h, 1);
      REQUIRE(pg.size() == 3);
      for (double& c : pg) c /= pg[0];
      CHECK(pg[1] == doctest::Approx(a1 * a2 - 2 * a1 - 2));
      CHECK(pg[2] == doctest::Approx(2 * a1 + 1));
      for (double k : {1.01, 2.0, 3.0}) {
        AlgorithmSpec ogd{Family::OGD, a1, a2, 0.0, k};
        ogd.mode = UpdateMode::Alternating;
        std::vector<double> po = alternating_char_poly(ogd, h, 1);
        REQUIRE(po.size() == 5);
        for (double& c : po) c /= po[0];
        CHECK(po[1] == doctest::Approx(a1 * a2 * k * k - 2 * a1 * k - 2));
        CHECK(po[2] == doctest::Approx(2 * a1 - 2 * a1 * a2 * k + 2 * a1 * k + 1));
        CHECK(po[3] == doctest::Approx(a1 * a2 - 2 * a1));
        CHECK(std::abs(po[4]) < 1e-12);
      }
    }
  }
}

TEST_CASE("alternating polynomial roots are the update-matrix eigenvalues") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> alpha(0.05, 1.0), kk(1.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2, m = 1 + (trial / 2) % 2;
    std::normal_distribution<double> g;
    const QuadraticOracle f(QuadraticGame::homogeneous(random_sym(rng, n, g(rng) > 0 ? 1 : -1, true),
                                                       random_sym(rng, m, g(rng) > 0 ? 1 : -1, true),
                                                       random_block(rng, n, m)));
    AlgorithmSpec spec{trial % 2 == 0 ? Family::GDA : Family::OGD, alpha(rng), alpha(rng), 0.0, kk(rng)};
    spec.mode = UpdateMode::Alternating;
    const Mat h = jacobian_H(f, Vec::Zero(n), Vec::Zero(m), spec.alpha1, spec.alpha2).H;
    const std::vector<double> poly = alternating_char_poly(spec, h, n);
    const CVec eig = linalg::general_eig(augmented_jacobian(spec, h, n));
    std::vector<cd> from_matrix(eig.data(), eig.data() + eig.size());
    const std::vector<cd> from_poly = oracle::roots(poly);
    REQUIRE(from_poly.size() == from_matrix.size());
    // Repeated roots lose half their digits.
    CHECK(oracle::match_distance(from_poly, from_matrix) < 1e-5);
  }
}

TEST_CASE("exponential_stability examples") {
  const QuadraticOracle q = nls_oracle();
  const Vec o = Vec::Zero(1);
  for (double a1 : {0.01, 0.1, 1.0}) {
    for (double a2 : {0.01, 0.5, 2.0, 10.0}) {
      CHECK_FALSE(exponential_stability({Family::GDA, a1, a2}, q, o, o).stable);
      AlgorithmSpec alt{Family::GDA, a1, a2};
      alt.mode = UpdateMode::Alternating;
      CHECK_FALSE(exponential_stability(alt, q, o, o).stable);
    }
  }
  const StabilityVerdict eg = exponential_stability({Family::EG, 0.1, 1.5, 1e6}, q, o, o);
  CHECK(eg.stable);
  CHECK(eg.agreement);
  const StabilityVerdict ogd = exponential_stability({Family::OGD, 0.1, 2.0, 0.0, 1.01}, q, o, o);
  CHECK(ogd.stable);
  CHECK(ogd.spectral_radius_of_update < 1.0);

  const Fixture& fl = fixture("failure_lrp");
  const Vec z2 = Vec::Zero(2);
  for (double a1 : {0.05, 0.3, 1.0})
    for (double a2 : {0.05, 0.3, 1.0, 3.0})
      for (double k : {1.01, 1.5, 2.0, 3.0}) {
        const StabilityVerdict v = exponential_stability({Family::OGD, a1, a2, 0.0, k}, *fl.oracle, z2, z2);
        CHECK((!v.stable || v.marginal));
      }
}

TEST_CASE("predicate and update-matrix verdicts agree on random draws") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> alpha(0.02, 1.0), momentum(-0.9, 0.9), ratio(0.3, 5.0), kk(1.05, 3.5);
  std::uniform_int_distribution<int> fam(0, 7);
  int checked = 0, marginal = 0, stable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 2, m = 1 + (trial / 2) % 2;
    const Mat a = random_sym(rng, n, g(rng) > 0 ? 1 : -1, true);
    const Mat b = random_sym(rng, m, g(rng) > -0.5 ? -1 : 1, true);
    const QuadraticOracle f(QuadraticGame::homogeneous(a, b, random_block(rng, n, m)));
    AlgorithmSpec s{Family::GDA, alpha(rng), alpha(rng)};
    switch (fam(rng)) {
      case 0: break;
      case 1: s.family = Family::HB; s.beta = momentum(rng); break;
      case 2: s.family = Family::NAG; s.beta = momentum(rng); break;
      case 3: s.family = Family::EG; s.beta = ratio(rng); break;
      case 4: s.family = Family::PastEG; s.beta = ratio(rng); break;
      case 5: s.family = Family::OGD; s.k = kk(rng); break;
      case 6: s.mode = UpdateMode::Alternating; break;
      default: s.family = Family::OGD; s.k = kk(rng); s.mode = UpdateMode::Alternating; break;
    }
    const StabilityVerdict v = exponential_stability(s, f, Vec::Zero(n), Vec::Zero(m));
    if (v.marginal) {
      ++marginal;
      continue;
    }
    ++checked;
    if (v.stable) ++stable;
    CHECK_MESSAGE(v.agreement, to_string(s.family), " rho=", v.spectral_radius_of_update);
    CHECK(v.stable == (v.spectral_radius_of_update < 1.0));
  }
  CHECK(checked > 400);
  CHECK(stable > 50);
  MESSAGE("marginal draws skipped: ", marginal);

  for (const auto& id : fixture_ids()) {
    const Fixture& fx = fixture(id);
    for (Family family : {Family::GDA, Family::EG, Family::OGD, Family::HB, Family::NAG}) {
      const StabilityVerdict v = exponential_stability({family, 0.1, 0.3, 0.5, 2.0}, *fx.oracle, fx.x_star, fx.y_star);
      CHECK_MESSAGE(v.agreement, id, " ", to_string(family));
    }
  }
}

TEST_CASE("local saddle spectra lie in the closed left half-plane") {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> alpha(0.01, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 3, m = 1 + (trial / 3) % 3;
    const QuadraticOracle f(QuadraticGame::homogeneous(random_sym(rng, n, 1.0, true), random_sym(rng, m, -1.0, true),
                                                       random_block(rng, n, m)));
    const SaddleSpectrumReport r = saddle_spectrum_check(f, Vec::Zero(n), Vec::Zero(m), alpha(rng), alpha(rng));
    CHECK_MESSAGE(r.max_real <= 1e-9, "max real part ", r.max_real);
    CHECK(r.saddle_consistent);
  }
  const QuadraticOracle bil(QuadraticGame::homogeneous(s1(0), s1(0), s1(2)));
  const SaddleSpectrumReport b = saddle_spectrum_check(bil, Vec::Zero(1), Vec::Zero(1), 1.0, 4.0);
  CHECK(std::abs(b.max_real) < 1e-12);
  // +-i sqrt(gamma) sigma with gamma = 4, sigma = 2.
  CHECK(std::abs(std::abs(b.eigenvalues(0).imag()) - 4.0) < 1e-12);
}

TEST_CASE("extra-gradient and OGD are stable at nondegenerate local saddles") {
  std::mt19937_64 rng(300);
  std::uniform_real_distribution<double> kk(1.0001, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2, m = 1 + (trial / 2) % 2;
    const bool bilinear = trial % 5 == 0;
    QuadraticGame q = QuadraticGame::homogeneous(random_sym(rng, n, 1.0, false), random_sym(rng, m, -1.0, false),
                                                 random_block(rng, n, m));
    if (bilinear) {
      if (n != m) continue;
      q.A.setZero();
      q.B.setZero();
    }
    const QuadraticOracle f(q);
    const CVec mu = linalg::general_eig(jacobian_H(f, Vec::Zero(n), Vec::Zero(m), 1.0, 1.0).H);
    double top = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) top = std::max(top, std::abs(mu(i)));
    if (top < 1e-6) continue;
    const double k = kk(rng);
    // 5% inside the hypothesis |lambda| < 1/alpha (EG) and |lambda| < 1/(k alpha) (OGD).
    const double alpha_eg = 0.95 / top, alpha_ogd = 0.95 / (k * top);
    CHECK(exponential_stability({Family::EG, alpha_eg, alpha_eg, 1.0}, f, Vec::Zero(n), Vec::Zero(m)).stable);
    CHECK(exponential_stability({Family::OGD, alpha_ogd, alpha_ogd, 0.0, k}, f, Vec::Zero(n), Vec::Zero(m)).stable);
  }
}

TEST_CASE("region rasters") {
  const RegionRaster gda = region_raster({Family::GDA, 0.0, false}, {-2.2, 0.2, -1.2, 1.2}, 121, 121);
  int mismatches = 0;
  for (int j = 0; j < gda.ny; ++j)
    for (int i = 0; i < gda.nx; ++i) {
      const cd l = gda.lambda_at(i, j);
      if (std::abs(std::abs(l + 1.0) - 1.0) < 1e-6) continue;
      if (gda.at(i, j) != (std::abs(l + 1.0) < 1.0)) ++mismatches;
    }
  CHECK(mismatches == 0);
  const auto [ci, cj] = gda.pixel_of(-1.0);
  CHECK(gda.at(ci, cj));

  const RegionRaster ogd = region_raster({Family::OGD, 0.0, true}, {}, 101, 101);
  for (int j = 0; j < ogd.ny; ++j)
    for (int i = 0; i < ogd.nx; ++i) {
      const cd l = ogd.lambda_at(i, j);
      if (ogd.marginal_at(i, j)) continue;
      CHECK(ogd.at(i, j) == (std::abs(l) < 1.0 && std::abs(l - 0.5) > 0.5));
    }

  // Horizontal versus vertical extent of the heavy-ball ellipse.
  auto extents = [](const RegionRaster& r) {
    double re_lo = 1e9, re_hi = -1e9, im_lo = 1e9, im_hi = -1e9;
    for (int j = 0; j < r.ny; ++j)
      for (int i = 0; i < r.nx; ++i)
        if (r.at(i, j)) {
          const cd l = r.lambda_at(i, j);
          re_lo = std::min(re_lo, l.real());
          re_hi = std::max(re_hi, l.real());
          im_lo = std::min(im_lo, l.imag());
          im_hi = std::max(im_hi, l.imag());
        }
    return std::pair{re_hi - re_lo, im_hi - im_lo};
  };
  const Window wide{-3.0, 1.0, -2.0, 2.0};
  const auto [pw, ph] = extents(region_raster({Family::HB, 0.4, false}, wide, 201, 201));
  const auto [nw, nh] = extents(region_raster({Family::HB, -0.4, false}, wide, 201, 201));
  CHECK(pw > ph);
  CHECK(nh > nw);
  CHECK(pw == doctest::Approx(2.8).epsilon(0.02));
  CHECK(ph == doctest::Approx(1.2).epsilon(0.03));

  const RegionRaster threaded = region_raster({Family::NAG, 0.4, false}, {}, 64, 48, 4);
  const RegionRaster serial = region_raster({Family::NAG, 0.4, false}, {}, 64, 48, 1);
  CHECK(threaded.stable == serial.stable);
  CHECK(threaded.marginal == serial.marginal);
  CHECK_THROWS_AS(region_raster({Family::GDA, 0.0, false}, {1.0, 0.0, -1.0, 1.0}, 4, 4), Error);
}

TEST_CASE("region CSV layout") {
  const RegionRaster a = region_raster({Family::GDA, 0.0, false}, {}, 3, 2);
  const RegionRaster b = region_raster({Family::EG, 1.0, false}, {}, 3, 2);
  std::ostringstream os;
  write_region_csv(os, {a, b}, {"gda", "eg_b1"});
  const std::string csv = os.str();
  CHECK(csv.rfind("re,im,gda,eg_b1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  std::ostringstream bad;
  CHECK_THROWS_AS(write_region_csv(bad, {a}, {"x", "y"}), Error);
}

TEST_CASE("nesting of stability regions") {
  const NestingReport eg = nesting_check(Family::EG, {{4.0, 2.0}, {6.0, 4.0}, {100.0, 1.0}}, 20000);
  CHECK(eg.ok);
  CHECK(eg.counterexamples.empty());
  CHECK(eg.checked > 50000);
  const NestingReport ogd = nesting_check(Family::OGD, {{3.0, 1.5}, {2.0, 1.1}}, 20000);
  CHECK(ogd.ok);
  // GDA sits inside EG(1) only within the unit disc: lambda = -1.9 is GDA-stable but not EG-stable.
  CHECK(region_inclusion({Family::GDA, 0.0, false}, {Family::EG, 1.0, false}, 20000, 42, {-3.0, 1.0, -2.0, 2.0}, 1.0)
            .ok);
  CHECK_FALSE(region_inclusion({Family::GDA, 0.0, false}, {Family::EG, 1.0, false}, 20000).ok);
  CHECK(region_inclusion({Family::GDA, 0.0, false}, {Family::OGD, 2.0, false}, 20000, 42,
                         {-3.0, 1.0, -2.0, 2.0}, 1.0 / std::sqrt(3.0))
            .ok);
  // The reverse inclusions fail, so the check has teeth.
  CHECK_FALSE(region_inclusion({Family::EG, 4.0, false}, {Family::EG, 2.0, false}, 20000).ok);
  CHECK_THROWS_AS(nesting_check(Family::EG, {{2.0, 4.0}}, 100), Error);
  CHECK_FALSE(region_inclusion({Family::EG, 1.0, false}, {Family::GDA, 0.0, false}, 20000).ok);
}

TEST_CASE("spectrum constructors hit their targets") {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> re(-2.0, 0.0), im(-2.0, 2.0), any(-2.0, 2.0), alpha(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const cd target{re(rng), im(rng)};
    const double a1 = alpha(rng), a2 = alpha(rng);
    const QuadraticGame g = construct_saddle_game(target, a1, a2);
    const CVec eig = linalg::general_eig(jacobian_H(QuadraticOracle(g), Vec::Zero(1), Vec::Zero(1), a1, a2).H);
    CHECK(std::min(std::abs(eig(0) - target), std::abs(eig(1) - target)) < 1e-9);
    CHECK(quadratic::classify(g).saddle.exists);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const cd target{any(rng), any(rng)};
    const double a1 = alpha(rng), a2 = alpha(rng);
    const QuadraticGame g = construct_minimax_game(target, a1, a2);
    const CVec eig = linalg::general_eig(jacobian_H(QuadraticOracle(g), Vec::Zero(1), Vec::Zero(1), a1, a2).H);
    CHECK(std::min(std::abs(eig(0) - target), std::abs(eig(1) - target)) < 1e-9);
    const ClassificationReport r = quadratic::classify(g);
    CHECK(r.local_minimax.exists);
    CHECK(r.local_minimax.set.contains(Vec::Zero(2)));
  }
  CHECK_THROWS_AS(construct_saddle_game({0.5, 0.0}, 1.0, 1.0), Error);
}

TEST_CASE("two-timescale search") {
  const std::vector<double> gammas = {1, 2, 5, 10, 20, 50, 100, 200};
  const std::vector<double> alphas = {1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  const Fixture& lng = fixture("local_non_global");
  const TwoTimescaleResult r = strict_minimax_two_timescale_search(*lng.oracle, lng.x_star, lng.y_star, gammas, alphas);
  CHECK(r.gamma0 >= 1.0);
  CHECK(r.alpha0 > 0.0);
  for (double gamma : gammas) {
    if (gamma < r.gamma0) continue;
    for (double a2 : alphas) {
      if (a2 > r.alpha0) continue;
      const double a1 = a2 / gamma;
      CHECK(exponential_stability({Family::EG, a1, a2, 1.0}, *lng.oracle, lng.x_star, lng.y_star).stable);
      CHECK(exponential_stability({Family::OGD, a1, a2, 0.0, 2.0}, *lng.oracle, lng.x_star, lng.y_star).stable);
    }
  }

  const QuadraticOracle decoupled(QuadraticGame::homogeneous(s1(1), s1(-1), s1(0)));
  const TwoTimescaleResult d =
      strict_minimax_two_timescale_search(decoupled, Vec::Zero(1), Vec::Zero(1), gammas, alphas);
  CHECK(d.gamma0 == 1.0);

  CHECK_THROWS_AS(strict_minimax_two_timescale_search(nls_oracle(), Vec::Zero(1), Vec::Zero(1), gammas, alphas),
                  Error);
}
