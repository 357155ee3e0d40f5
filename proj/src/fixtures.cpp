#include "minimaxlab/fixtures.hpp"

#include "minimaxlab/error.hpp"

#include <cmath>
#include <map>

namespace minimaxlab {

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Mat m1(double a) { return Mat::Constant(1, 1, a); }

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

// Scalar game from closed forms in (x, y).
struct Scalar {
  double (*f)(double, double);
  double (*fx)(double, double);
  double (*fy)(double, double);
  double (*fxx)(double, double);
  double (*fxy)(double, double);
  double (*fyy)(double, double);
};

OraclePtr scalar_oracle(const std::string& label, Scalar s) {
  OracleFunctions fns;
  fns.value = [s](const Vec& x, const Vec& y) { return s.f(x(0), y(0)); };
  fns.grad_x = [s](const Vec& x, const Vec& y) { return v1(s.fx(x(0), y(0))); };
  fns.grad_y = [s](const Vec& x, const Vec& y) { return v1(s.fy(x(0), y(0))); };
  fns.hess_xx = [s](const Vec& x, const Vec& y) { return m1(s.fxx(x(0), y(0))); };
  fns.hess_xy = [s](const Vec& x, const Vec& y) { return m1(s.fxy(x(0), y(0))); };
  fns.hess_yy = [s](const Vec& x, const Vec& y) { return m1(s.fyy(x(0), y(0))); };
  return std::make_shared<FunctionOracle>(label, 1, 1, std::move(fns));
}

Fixture scalar_fixture(std::string id, std::string formula, Scalar s, double x0, double y0,
                       std::vector<double> eps, double x_radius, double y_radius = 0.05) {
  Fixture fx;
  fx.oracle = scalar_oracle(id, s);
  fx.id = std::move(id);
  fx.formula = std::move(formula);
  fx.x_star = v1(x0);
  fx.y_star = v1(y0);
  fx.eps_list = std::move(eps);
  fx.x_radius = x_radius;
  fx.y_radius = y_radius;
  return fx;
}

Fixture quadratic_fixture(std::string id, std::string formula, QuadraticGame g, std::vector<double> eps,
                          double x_radius, double y_radius) {
  Fixture fx;
  fx.oracle = make_quadratic_oracle(g, id);
  fx.quadratic = g;
  fx.id = std::move(id);
  fx.formula = std::move(formula);
  fx.x_star = Vec::Zero(g.n());
  fx.y_star = Vec::Zero(g.m());
  fx.eps_list = std::move(eps);
  fx.x_radius = x_radius;
  fx.y_radius = y_radius;
  return fx;
}

Fixture counter_jin() {
  OracleFunctions fns;
  fns.value = [](const Vec& x, const Vec& y) {
    const double s = y(0) + y(1);
    return -x(1) * x(1) + x(1) * std::pow(y(1), 3) - s * s + 2.0 * x(0) * s;
  };
  fns.grad_x = [](const Vec& x, const Vec& y) {
    return v2(2.0 * (y(0) + y(1)), -2.0 * x(1) + std::pow(y(1), 3));
  };
  fns.grad_y = [](const Vec& x, const Vec& y) {
    const double s = y(0) + y(1);
    return v2(-2.0 * s + 2.0 * x(0), 3.0 * x(1) * y(1) * y(1) - 2.0 * s + 2.0 * x(0));
  };
  fns.hess_xx = [](const Vec&, const Vec&) { return m2(0, 0, 0, -2); };
  fns.hess_xy = [](const Vec&, const Vec& y) { return m2(2, 2, 0, 3.0 * y(1) * y(1)); };
  fns.hess_yy = [](const Vec& x, const Vec& y) { return m2(-2, -2, -2, -2 + 6.0 * x(1) * y(1)); };
  Fixture fx;
  fx.id = "counter_jin";
  fx.formula = "-x2^2 + x2*y2^3 - (y1+y2)^2 + 2*x1*(y1+y2)";
  fx.oracle = std::make_shared<FunctionOracle>(fx.id, 2, 2, std::move(fns));
  fx.x_star = Vec::Zero(2);
  fx.y_star = Vec::Zero(2);
  fx.eps_list = {0.5, 0.4, 0.3};
  fx.x_radius = 2e-3;
  return fx;
}

std::map<std::string, Fixture> build_registry() {
  std::map<std::string, Fixture> reg;
  auto add = [&](Fixture f) { reg.emplace(f.id, std::move(f)); };

  add(scalar_fixture(
      "rem_critical", "-x^2 + x*y^3",
      {[](double x, double y) { return -x * x + x * y * y * y; }, [](double x, double y) { return -2 * x + y * y * y; },
       [](double x, double y) { return 3 * x * y * y; }, [](double, double) { return -2.0; },
       [](double, double y) { return 3 * y * y; }, [](double x, double y) { return 6 * x * y; }},
      0, 0, {0.5, 0.4, 0.3}, 0.01));
  add(counter_jin());
  add(scalar_fixture(
      "rem_higher_order", "-x^2 - y^4 + 4*x*y^2",
      {[](double x, double y) { return -x * x - std::pow(y, 4) + 4 * x * y * y; },
       [](double x, double y) { return -2 * x + 4 * y * y; },
       [](double x, double y) { return -4 * y * y * y + 8 * x * y; }, [](double, double) { return -2.0; },
       [](double, double y) { return 8 * y; }, [](double x, double y) { return -12 * y * y + 8 * x; }},
      0, 0, {0.5, 0.4, 0.3}, 0.01));
  add(scalar_fixture(
      "kawa_suff", "x*y^3 - y^6",
      {[](double x, double y) { return x * y * y * y - std::pow(y, 6); }, [](double, double y) { return y * y * y; },
       [](double x, double y) { return 3 * x * y * y - 6 * std::pow(y, 5); }, [](double, double) { return 0.0; },
       [](double, double y) { return 3 * y * y; }, [](double x, double y) { return 6 * x * y - 30 * std::pow(y, 4); }},
      0, 0, {0.5, 0.3, 0.2}, 0.05));
  add(scalar_fixture(
      "stronger_suff_cond", "x*y^2 + x^2",
      {[](double x, double y) { return x * y * y + x * x; }, [](double x, double y) { return y * y + 2 * x; },
       [](double x, double y) { return 2 * x * y; }, [](double, double) { return 2.0; },
       [](double, double y) { return 2 * y; }, [](double x, double) { return 2 * x; }},
      0, 0, {0.5, 0.3, 0.2}, 0.05));
  add(scalar_fixture(
      "lrp_eps0", "x*y^3 - x^2/(1+y^2)",
      {[](double x, double y) { return x * y * y * y - x * x / (1 + y * y); },
       [](double x, double y) { return y * y * y - 2 * x / (1 + y * y); },
       [](double x, double y) { return 3 * x * y * y + 2 * x * x * y / std::pow(1 + y * y, 2); },
       [](double, double y) { return -2 / (1 + y * y); },
       [](double x, double y) { return 3 * y * y + 4 * x * y / std::pow(1 + y * y, 2); },
       [](double x, double y) { return 6 * x * y + 2 * x * x * (1 - 3 * y * y) / std::pow(1 + y * y, 3); }},
      0, 0, {0.5, 0.4, 0.3}, 0.01, 0.01));
  add(scalar_fixture(
      "glbstatl", "x^3*y",
      {[](double x, double y) { return x * x * x * y; }, [](double x, double y) { return 3 * x * x * y; },
       [](double x, double) { return x * x * x; }, [](double x, double y) { return 6 * x * y; },
       [](double x, double) { return 3 * x * x; }, [](double, double) { return 0.0; }},
      0, 1, {0.5, 0.3, 0.1}, 0.5));
  add(scalar_fixture(
      "nc", "x^4/4 - x^2/2 + x*y",
      {[](double x, double y) { return std::pow(x, 4) / 4 - x * x / 2 + x * y; },
       [](double x, double y) { return x * x * x - x + y; }, [](double x, double) { return x; },
       [](double x, double) { return 3 * x * x - 1; }, [](double, double) { return 1.0; },
       [](double, double) { return 0.0; }},
      0, 0, {0.5, 0.3, 0.1}, 0.05));
  add(scalar_fixture(
      "stationary_global_no_local", "-y^4/4 + y^2/2 - x*y",
      {[](double x, double y) { return -std::pow(y, 4) / 4 + y * y / 2 - x * y; },
       [](double, double y) { return -y; }, [](double x, double y) { return -y * y * y + y - x; },
       [](double, double) { return 0.0; }, [](double, double) { return -1.0; },
       [](double, double y) { return 1 - 3 * y * y; }},
      0, 0, {0.5, 0.3, 0.1}, 0.05));
  add(scalar_fixture(
      "local_non_global", "x^3 - x - y^2",
      {[](double x, double y) { return x * x * x - x - y * y; }, [](double x, double) { return 3 * x * x - 1; },
       [](double, double y) { return -2 * y; }, [](double x, double) { return 6 * x; },
       [](double, double) { return 0.0; }, [](double, double) { return -2.0; }},
      1.0 / std::sqrt(3.0), 0, {0.5, 0.3, 0.1}, 0.2));

  add(quadratic_fixture("no_local_saddle", "-x^2 + x*y", QuadraticGame::homogeneous(m1(-2), m1(0), m1(1)),
                        {0.1, 0.05, 0.01}, 0.009, 0.009));
  add(quadratic_fixture("bilinear", "x*y", QuadraticGame::homogeneous(m1(0), m1(0), m1(1)), {0.5, 0.3, 0.1},
                        0.05, 0.05));
  add(quadratic_fixture("glp", "-x^2 + x*y + y^2", QuadraticGame::homogeneous(m1(-2), m1(2), m1(1)),
                        {0.5, 0.4, 0.3}, 0.1, 0.1));
  add(quadratic_fixture("separable", "-x^2 + y^2", QuadraticGame::homogeneous(m1(-2), m1(2), m1(0)),
                        {0.5, 0.4, 0.3}, 0.1, 0.1));
  add(quadratic_fixture("onedq", "-x^2 - y^2 + 2*x*y", QuadraticGame::homogeneous(m1(-2), m1(-2), m1(2)),
                        {0.5, 0.3, 0.1}, 0.05, 0.05));
  add(quadratic_fixture("failure_lrp", "-x1^2 + x1*y1 + x2*y2 + y2^2",
                        QuadraticGame::homogeneous(m2(-2, 0, 0, 0), m2(0, 0, 0, 2), Mat::Identity(2, 2)),
                        {0.5, 0.4, 0.3}, 0.1, 0.1));
  add(quadratic_fixture("glp_nbhr", "-x2^2 + x1*y1 + x2*y2 + y1^2",
                        QuadraticGame::homogeneous(m2(0, 0, 0, -2), m2(2, 0, 0, 0), Mat::Identity(2, 2)),
                        {0.5, 0.4, 0.3}, 0.1, 0.1));
  return reg;
}

const std::map<std::string, Fixture>& registry() {
  static const std::map<std::string, Fixture> reg = build_registry();
  return reg;
}

}  // namespace

const Fixture& fixture(const std::string& id) {
  const auto& reg = registry();
  const auto it = reg.find(id);
  if (it == reg.end()) throw Error(ErrorKind::UnknownFixture, id);
  return it->second;
}

std::vector<std::string> fixture_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  return ids;
}

}  // namespace minimaxlab
