#include "minimaxlab/envelope.hpp"
#include "minimaxlab/error.hpp"
#include "minimaxlab/fixtures.hpp"
#include "minimaxlab/quadratic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace minimaxlab;

namespace {

Mat s1(double v) { return Mat::Constant(1, 1, v); }
Vec v1(double v) { return Vec::Constant(1, v); }

OraclePtr quad1(double a, double b, double c) {
  return make_quadratic_oracle(QuadraticGame::homogeneous(s1(a), s1(b), s1(c)));
}

// Quotient (env(x + alpha t) - env(x)) / alpha, extrapolated linearly to alpha = 0 from the two
// smallest steps.
double extrapolated_quotient(const GameOracle& f, const Vec& x, const Neighborhood& nb, const Vec& t) {
  const double base = local_envelope(f, x, nb);
  auto q = [&](double alpha) { return (local_envelope(f, x + alpha * t, nb) - base) / alpha; };
  const double coarse = q(1e-3), fine = q(1e-4);
  return fine - (coarse - fine) / 9.0;
}

Vec unit2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v / v.norm();
}

}  // namespace

TEST_CASE("local_envelope examples") {
  const Fixture& rem = fixture("rem_critical");
  CHECK(local_envelope(*rem.oracle, v1(0.1), Neighborhood::linf(v1(0.0), 0.5)) ==
        doctest::Approx(0.1 * 0.125 - 0.01).epsilon(1e-9));
  CHECK(local_envelope(*rem.oracle, v1(0.1), Neighborhood::linf(v1(0.3), 0.0)) ==
        doctest::Approx(rem.oracle->value(v1(0.1), v1(0.3))));
  CHECK(local_envelope(*quad1(0, 0, 1), v1(0.2), Neighborhood::linf(v1(0.0), 1.0)) == doctest::Approx(0.2));
  CHECK_THROWS_AS(local_envelope(*make_quadratic_oracle(QuadraticGame::homogeneous(
                                     s1(1), Mat::Identity(3, 3) * -1.0, Mat::Zero(1, 3))),
                                 v1(0.0), Neighborhood::linf(Vec::Zero(3), 0.1)),
                  Error);
}

TEST_CASE("local_envelope is a lower bound close to the exact quadratic envelope") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), eps = 0.1 + 0.2 * (trial % 3), x = 0.5 * u(rng);
    const OraclePtr f = quad1(a, b, c);
    const double exact = quadratic::envelope_1d(QuadraticGame::homogeneous(s1(a), s1(b), s1(c)),
                                                quadratic::EnvelopeKind::Upper, eps, x);
    const double numeric = local_envelope(*f, v1(x), Neighborhood::linf(v1(0.0), eps));
    CHECK(numeric <= exact + 1e-12);
    CHECK(exact - numeric < 1e-9);
  }
}

TEST_CASE("two-dimensional inner maximization in all shapes") {
  QuadraticGame g = QuadraticGame::homogeneous(s1(0), -Mat::Identity(2, 2), Mat::Ones(1, 2));
  const OraclePtr f = make_quadratic_oracle(g);
  // max over y of x(y1 + y2) - |y|^2/2 is attained at y = (x, x).
  const double x = 0.05;
  CHECK(local_envelope(*f, v1(x), Neighborhood::linf(Vec::Zero(2), 0.5)) == doctest::Approx(x * x).epsilon(1e-9));
  CHECK(local_envelope(*f, v1(x), Neighborhood::l2(Vec::Zero(2), 0.5)) == doctest::Approx(x * x).epsilon(1e-9));
  // Linf corner (r, r) beats the L2 point (r, r)/sqrt(2) when the maximizer is outside both.
  const double big = 2.0, r = 0.1;
  const double linf = local_envelope(*f, v1(big), Neighborhood::linf(Vec::Zero(2), r));
  const double l2 = local_envelope(*f, v1(big), Neighborhood::l2(Vec::Zero(2), r));
  CHECK(linf == doctest::Approx(2 * big * r - r * r).epsilon(1e-9));
  CHECK(l2 == doctest::Approx(std::sqrt(2.0) * big * r - r * r / 2).epsilon(1e-9));
  Mat rotated(2, 2);
  rotated << 1, 1, 1, 1;
  const double eig = local_envelope(*f, v1(big), Neighborhood::eigenspace(Vec::Zero(2), r, rotated));
  // The eigenspace box is aligned with (1,1), so its best point matches the L2 one.
  CHECK(eig == doctest::Approx(l2).epsilon(1e-9));
}

TEST_CASE("active_set examples") {
  const ActiveSetSample bil = active_set(*quad1(0, 0, 1), v1(0.0), Neighborhood::linf(v1(0.0), 0.5));
  REQUIRE(bil.points.size() > 100);
  double lo = 1.0, hi = -1.0;
  for (const Vec& y : bil.points) {
    lo = std::min(lo, y(0));
    hi = std::max(hi, y(0));
  }
  CHECK(lo == doctest::Approx(-0.5));
  CHECK(hi == doctest::Approx(0.5));

  const ActiveSetSample rem = active_set(*fixture("rem_critical").oracle, v1(0.0), Neighborhood::linf(v1(0.0), 0.3));
  CHECK(rem.points.size() > 100);

  // -(y - 0.1)^2 + xy: B = -2, b = 0.2, constant -0.01 after halving.
  QuadraticGame strict = QuadraticGame::homogeneous(s1(0), s1(-2), s1(1));
  strict.b = v1(0.2);
  strict.c = -0.02;
  const ActiveSetSample one = active_set(*make_quadratic_oracle(strict), v1(0.0), Neighborhood::linf(v1(0.0), 0.3));
  // Points within the value tolerance differ from the maximizer by at most sqrt(tol).
  REQUIRE_FALSE(one.points.empty());
  for (const Vec& y : one.points) CHECK(std::abs(y(0) - 0.1) < 1e-5);
  for (std::size_t i = 0; i < bil.points.size(); ++i) {
    CHECK(std::abs(bil.values[i]) <= bil.tolerance);
  }
}

TEST_CASE("danskin_dd examples") {
  const OraclePtr bil = quad1(0, 0, 1);
  for (double eps : {0.1, 0.5}) {
    CHECK(danskin_dd(*bil, v1(0.0), Neighborhood::linf(v1(0.0), eps), v1(1.0)) == doctest::Approx(eps));
    CHECK(danskin_dd(*bil, v1(0.0), Neighborhood::linf(v1(0.0), eps), v1(-1.0)) == doctest::Approx(eps));
  }
  const Fixture& rem = fixture("rem_critical");
  for (double eps : {0.3, 0.5}) {
    for (double t : {1.0, -1.0})
      CHECK(danskin_dd(*rem.oracle, v1(0.0), Neighborhood::linf(v1(0.0), eps), v1(t)) ==
            doctest::Approx(eps * eps * eps));
  }
  const Fixture& gl = fixture("glbstatl");
  CHECK(std::abs(danskin_dd(*gl.oracle, v1(0.0), Neighborhood::linf(v1(1.0), 0.5), v1(1.0))) < 1e-12);
}

TEST_CASE("danskin_dd matches extrapolated envelope quotients") {
  struct Case {
    OraclePtr f;
    Vec x;
    Vec y;
    std::vector<Vec> dirs;
  };
  const Fixture& cj = fixture("counter_jin");
  std::vector<Case> cases = {
      {quad1(0, 0, 1), v1(0.0), v1(0.0), {v1(1.0), v1(-1.0)}},
      {fixture("rem_critical").oracle, v1(0.0), v1(0.0), {v1(1.0), v1(-1.0)}},
      {fixture("glbstatl").oracle, v1(0.0), v1(1.0), {v1(1.0), v1(-1.0)}},
      {cj.oracle, cj.x_star, cj.y_star, {unit2(1, 0), unit2(0, 1), unit2(1, 1), unit2(-1, 2), unit2(0, -1)}},
  };
  for (const Case& c : cases) {
    for (double eps : {0.2, 0.4}) {
      const Neighborhood nb = Neighborhood::linf(c.y, eps);
      for (const Vec& t : c.dirs) {
        const double dd = danskin_dd(*c.f, c.x, nb, t);
        CHECK_MESSAGE(std::abs(dd - extrapolated_quotient(*c.f, c.x, nb, t)) < 5e-3, c.f->label(), " eps=", eps);
      }
    }
  }
}

TEST_CASE("critical_directions examples") {
  const Fixture& rem = fixture("rem_critical");
  const CriticalPartition p1 =
      critical_directions(*rem.oracle, v1(0.0), v1(0.0), {0.5, 0.4, 0.3}, direction_grid(1));
  CHECK(p1.critical.empty());
  CHECK(p1.positive.size() == 2);
  CHECK(p1.monotone);

  const Fixture& ho = fixture("rem_higher_order");
  const CriticalPartition p2 = critical_directions(*ho.oracle, v1(0.0), v1(0.0), {0.5, 0.4, 0.3}, direction_grid(1));
  CHECK(p2.critical.size() == 2);
  CHECK(p2.positive.empty());

  const Fixture& cj = fixture("counter_jin");
  const CriticalPartition p3 = critical_directions(*cj.oracle, cj.x_star, cj.y_star, cj.eps_list, direction_grid(2, 64));
  REQUIRE_FALSE(p3.critical.empty());
  for (const Vec& t : p3.critical) CHECK(std::abs(t(1)) < 1e-12);
  for (const Vec& t : p3.positive) CHECK(std::abs(t(1)) > 1e-12);
  CHECK(p3.critical.size() == 2);
  CHECK(p3.monotone);

  // x*y has y* = 0 as a non-maximizer of f(0, .)? No: f(0, .) = 0 is flat, so use -x^2 + y^2.
  CHECK_THROWS_AS(critical_directions(*quad1(-2, 2, 0), v1(0.0), v1(0.0), {0.3}, direction_grid(1)), Error);
}

// Tolerance matches the critical-direction threshold: flat maximizers admit active points whose
// x-gradient is of order sqrt(value tolerance).
TEST_CASE("danskin_dd is monotone in the radius") {
  std::vector<std::string> ids = {"rem_critical", "rem_higher_order", "counter_jin", "kawa_suff", "nc", "glbstatl"};
  const std::vector<double> radii = {0.05, 0.1, 0.2, 0.3, 0.45};
  for (const auto& id : ids) {
    const Fixture& fx = fixture(id);
    for (const Vec& t : direction_grid(fx.oracle->x_dim(), 16)) {
      double previous = -INFINITY;
      for (double eps : radii) {
        const double dd = danskin_dd(*fx.oracle, fx.x_star, Neighborhood::linf(fx.y_star, eps), t);
        CHECK_MESSAGE(previous <= dd + 1e-5, id);
        previous = dd;
      }
    }
  }
}

TEST_CASE("second_order_necessary_term examples") {
  CHECK(second_order_necessary_term(*fixture("rem_higher_order").oracle, v1(0.0), v1(0.0), v1(1.0)) ==
        doctest::Approx(6.0).epsilon(0.1 / 6.0));
  const Fixture& cj = fixture("counter_jin");
  CHECK(second_order_necessary_term(*cj.oracle, cj.x_star, cj.y_star, unit2(1, 0)) ==
        doctest::Approx(2.0).epsilon(0.05 / 2.0));
  CHECK(second_order_necessary_term(*fixture("rem_critical").oracle, v1(0.0), v1(0.0), v1(1.0)) ==
        doctest::Approx(-2.0));
}

TEST_CASE("verify_local_minimax examples") {
  const Fixture& nls = fixture("no_local_saddle");
  CHECK(verify_local_minimax(*nls.oracle, v1(0.0), v1(0.0), {0.1, 0.05, 0.01}, 0.009).verdict == Verdict::Yes);
  // Beyond 2 eps the envelope dips below its value at 0.
  const VerifyResult wide = verify_local_minimax(*nls.oracle, v1(0.0), v1(0.0), {0.01}, 0.05);
  CHECK(wide.verdict == Verdict::No);

  const Fixture& gl = fixture("glbstatl");
  const VerifyResult g = verify_local_minimax(*gl.oracle, gl.x_star, gl.y_star, gl.eps_list, gl.x_radius);
  REQUIRE(g.verdict == Verdict::No);
  REQUIRE(g.evidence.witness_x.size() == 1);
  CHECK(g.evidence.witness_x(0) < 0.0);

  const Fixture& kw = fixture("kawa_suff");
  CHECK(verify_local_minimax(*kw.oracle, kw.x_star, kw.y_star, kw.eps_list, kw.x_radius).verdict == Verdict::Yes);

  // y* = 0 is a minimizer of f(0, .) = y^2, not a maximizer.
  const VerifyResult notmax = verify_local_minimax(*quad1(-2, 2, 0), v1(0.0), v1(0.0), {0.1}, 0.05);
  CHECK(notmax.verdict == Verdict::No);
}

TEST_CASE("verify_lrp examples") {
  const Fixture& glp = fixture("glp");
  CHECK(verify_lrp(glp.oracle, glp.x_star, glp.y_star, {0.5, 0.4, 0.3, 0.0}, {0.5, 0.4, 0.3, 0.0},
                   {glp.x_radius, glp.y_radius})
            .verdict == Verdict::Yes);
  const Fixture& sep = fixture("separable");
  CHECK(verify_lrp(sep.oracle, sep.x_star, sep.y_star, {0.5, 0.4, 0.3, 0.0}, {0.5, 0.4, 0.3, 0.0},
                   {sep.x_radius, sep.y_radius})
            .verdict == Verdict::No);
  const Fixture& e0 = fixture("lrp_eps0");
  const VerifyResult r = verify_lrp(e0.oracle, e0.x_star, e0.y_star, {0.5, 0.4, 0.3, 0.0}, {0.5, 0.4, 0.3, 0.0},
                                    {e0.x_radius, e0.y_radius});
  CHECK(r.verdict == Verdict::Yes);
  REQUIRE(r.evidence.notes.size() == 2);
  CHECK(r.evidence.notes[1] == "y side passes at radius 0");
  // Every positive y-side radius fails on its own.
  const MirrorOracle mirrored(e0.oracle);
  for (double delta : {0.5, 0.3})
    CHECK(envelope_min_test(mirrored, e0.y_star, e0.x_star, delta, e0.y_radius).verdict == Verdict::No);
}

TEST_CASE("passing at a radius persists for larger radii over the same x-box") {
  const std::vector<double> radii = {0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 0.5};
  int failures_seen = 0;
  for (const auto& id : {"no_local_saddle", "bilinear", "glp", "onedq", "failure_lrp", "glp_nbhr"}) {
    const Fixture& fx = fixture(id);
    bool seen_pass = false;
    for (double eps : radii) {
      const Verdict v = envelope_min_test(*fx.oracle, fx.x_star, fx.y_star, eps, 0.009).verdict;
      if (seen_pass) CHECK_MESSAGE(v == Verdict::Yes, id, " eps=", eps);
      if (v == Verdict::Yes) seen_pass = true;
      if (v == Verdict::No) ++failures_seen;
    }
  }
  // -x^2 + xy has envelope eps|x| - x^2, which fails on |x| <= 0.009 once eps < 0.009.
  CHECK(envelope_min_test(*fixture("no_local_saddle").oracle, Vec::Zero(1), Vec::Zero(1), 0.005, 0.009).verdict ==
        Verdict::No);
  CHECK(failures_seen > 0);
}

TEST_CASE("fixture oracles match finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const auto& id : fixture_ids()) {
    const GameOracle& f = *fixture(id).oracle;
    const Eigen::Index n = f.x_dim(), m = f.y_dim();
    int failures = 0;
    for (int probe = 0; probe < 100; ++probe) {
      Vec x(n), y(m);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = u(rng);
      for (Eigen::Index j = 0; j < m; ++j) y(j) = u(rng);
      const double h = 1e-5;
      auto close = [&](double analytic, double numeric) {
        return std::abs(analytic - numeric) <= 1e-5 * std::max(1.0, std::abs(analytic));
      };
      const Vec gx = f.grad_x(x, y), gy = f.grad_y(x, y);
      const Mat hxx = f.hess_xx(x, y), hxy = f.hess_xy(x, y), hyy = f.hess_yy(x, y);
      for (Eigen::Index i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        if (!close(gx(i), (f.value(xp, y) - f.value(xm, y)) / (2 * h))) ++failures;
        const Vec dgx = (f.grad_x(xp, y) - f.grad_x(xm, y)) / (2 * h);
        const Vec dgy = (f.grad_y(xp, y) - f.grad_y(xm, y)) / (2 * h);
        for (Eigen::Index k = 0; k < n; ++k)
          if (!close(hxx(k, i), dgx(k))) ++failures;
        for (Eigen::Index j = 0; j < m; ++j)
          if (!close(hxy(i, j), dgy(j))) ++failures;
      }
      for (Eigen::Index j = 0; j < m; ++j) {
        Vec yp = y, ym = y;
        yp(j) += h;
        ym(j) -= h;
        if (!close(gy(j), (f.value(x, yp) - f.value(x, ym)) / (2 * h))) ++failures;
        const Vec dgy = (f.grad_y(x, yp) - f.grad_y(x, ym)) / (2 * h);
        const Vec dgx = (f.grad_x(x, yp) - f.grad_x(x, ym)) / (2 * h);
        for (Eigen::Index k = 0; k < m; ++k)
          if (!close(hyy(k, j), dgy(k))) ++failures;
        for (Eigen::Index i = 0; i < n; ++i)
          if (!close(hxy(i, j), dgx(i))) ++failures;
      }
    }
    CHECK_MESSAGE(failures == 0, id);
  }
}

TEST_CASE("convex-concave quadratics are local minimax exactly at stationary points") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const double a = std::abs(g(rng)) + 0.1, b = -std::abs(g(rng)) - 0.1, c = g(rng);
    QuadraticGame game = QuadraticGame::homogeneous(s1(a), s1(b), s1(c));
    game.a = v1(g(rng));
    game.b = v1(g(rng));
    const OraclePtr f = make_quadratic_oracle(game);
    const AffineSet st = quadratic::stationary_set(game);
    REQUIRE(st.dimension() == 0);
    const Vec z = st.basepoint;
    CHECK(verify_local_minimax(*f, z.head(1), z.tail(1), {0.3, 0.1}, 0.05).verdict == Verdict::Yes);
    const Vec off = z + Vec::Constant(2, 0.2 * (trial % 2 == 0 ? 1.0 : -1.0));
    CHECK(verify_local_minimax(*f, off.head(1), off.tail(1), {0.3, 0.1}, 0.05).verdict == Verdict::No);
  }
}

TEST_CASE("direction_grid shapes") {
  CHECK(direction_grid(1).size() == 2);
  const auto d2 = direction_grid(2, 8);
  REQUIRE(d2.size() == 8);
  for (const Vec& t : d2) CHECK(t.norm() == doctest::Approx(1.0));
  const auto d3a = direction_grid(3, 10, 5), d3b = direction_grid(3, 10, 5);
  REQUIRE(d3a.size() == 10);
  for (std::size_t i = 0; i < d3a.size(); ++i) CHECK((d3a[i] - d3b[i]).norm() == 0.0);
}

TEST_CASE("grid_global_1d on a strongly convex-concave game") {
  QuadraticGame game = QuadraticGame::homogeneous(s1(2), s1(-2), s1(1));
  game.a = v1(1.0);
  const QuadraticOracle f(game);
  const GridGlobalResult r = grid_global_1d(f, -2.0, 2.0, 0.01);
  const Vec z = quadratic::stationary_set(game).basepoint;
  REQUIRE_FALSE(r.minimax_x.empty());
  CHECK(std::abs(r.minimax_x.front() - z(0)) <= 0.02);
  REQUIRE_FALSE(r.maximin_points.empty());
  CHECK(std::abs(r.maximin_points.front().second - z(1)) <= 0.02);
  CHECK(r.minimax_value == doctest::Approx(r.maximin_value).epsilon(1e-3));
}
