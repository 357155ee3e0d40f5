#include "minimaxlab/oracle.hpp"

namespace minimaxlab {

QuadraticOracle::QuadraticOracle(QuadraticGame game, std::string label)
    : game_(std::move(game)), label_(std::move(label)) {
  game_.validate();
}

double QuadraticOracle::value(const Vec& x, const Vec& y) const { return quadratic::eval(game_, x, y); }

Vec QuadraticOracle::grad_x(const Vec& x, const Vec& y) const { return quadratic::grad(game_, x, y).first; }

Vec QuadraticOracle::grad_y(const Vec& x, const Vec& y) const { return quadratic::grad(game_, x, y).second; }

OraclePtr make_quadratic_oracle(const QuadraticGame& game, const std::string& label) {
  return std::make_shared<QuadraticOracle>(game, label);
}

Vec join(const Vec& x, const Vec& y) {
  Vec z(x.size() + y.size());
  z << x, y;
  return z;
}

}  // namespace minimaxlab
