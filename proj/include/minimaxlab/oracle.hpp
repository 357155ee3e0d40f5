#pragma once

#include "minimaxlab/linalg.hpp"
#include "minimaxlab/quadratic.hpp"

#include <functional>
#include <memory>
#include <string>

namespace minimaxlab {

// Twice-differentiable payoff f(x, y); x minimizes, y maximizes.
// Implementations must be safe to call concurrently.
class GameOracle {
 public:
  virtual ~GameOracle() = default;

  virtual Eigen::Index x_dim() const = 0;
  virtual Eigen::Index y_dim() const = 0;
  virtual std::string label() const = 0;

  virtual double value(const Vec& x, const Vec& y) const = 0;
  virtual Vec grad_x(const Vec& x, const Vec& y) const = 0;
  virtual Vec grad_y(const Vec& x, const Vec& y) const = 0;
  virtual Mat hess_xx(const Vec& x, const Vec& y) const = 0;
  virtual Mat hess_xy(const Vec& x, const Vec& y) const = 0;  // n x m, d2f / dx_i dy_j
  virtual Mat hess_yy(const Vec& x, const Vec& y) const = 0;
};

using OraclePtr = std::shared_ptr<const GameOracle>;

struct OracleFunctions {
  std::function<double(const Vec&, const Vec&)> value;
  std::function<Vec(const Vec&, const Vec&)> grad_x;
  std::function<Vec(const Vec&, const Vec&)> grad_y;
  std::function<Mat(const Vec&, const Vec&)> hess_xx;
  std::function<Mat(const Vec&, const Vec&)> hess_xy;
  std::function<Mat(const Vec&, const Vec&)> hess_yy;
};

class FunctionOracle final : public GameOracle {
 public:
  FunctionOracle(std::string label, Eigen::Index n, Eigen::Index m, OracleFunctions fns)
      : label_(std::move(label)), n_(n), m_(m), fns_(std::move(fns)) {}

  Eigen::Index x_dim() const override { return n_; }
  Eigen::Index y_dim() const override { return m_; }
  std::string label() const override { return label_; }
  double value(const Vec& x, const Vec& y) const override { return fns_.value(x, y); }
  Vec grad_x(const Vec& x, const Vec& y) const override { return fns_.grad_x(x, y); }
  Vec grad_y(const Vec& x, const Vec& y) const override { return fns_.grad_y(x, y); }
  Mat hess_xx(const Vec& x, const Vec& y) const override { return fns_.hess_xx(x, y); }
  Mat hess_xy(const Vec& x, const Vec& y) const override { return fns_.hess_xy(x, y); }
  Mat hess_yy(const Vec& x, const Vec& y) const override { return fns_.hess_yy(x, y); }

 private:
  std::string label_;
  Eigen::Index n_, m_;
  OracleFunctions fns_;
};

class QuadraticOracle final : public GameOracle {
 public:
  explicit QuadraticOracle(QuadraticGame game, std::string label = "quadratic");

  const QuadraticGame& game() const { return game_; }
  Eigen::Index x_dim() const override { return game_.n(); }
  Eigen::Index y_dim() const override { return game_.m(); }
  std::string label() const override { return label_; }
  double value(const Vec& x, const Vec& y) const override;
  Vec grad_x(const Vec& x, const Vec& y) const override;
  Vec grad_y(const Vec& x, const Vec& y) const override;
  Mat hess_xx(const Vec&, const Vec&) const override { return game_.A; }
  Mat hess_xy(const Vec&, const Vec&) const override { return game_.C; }
  Mat hess_yy(const Vec&, const Vec&) const override { return game_.B; }

 private:
  QuadraticGame game_;
  std::string label_;
};

// g(y, x) = -f(x, y): the y player becomes the minimizer.
class MirrorOracle final : public GameOracle {
 public:
  explicit MirrorOracle(OraclePtr inner) : inner_(std::move(inner)) {}

  Eigen::Index x_dim() const override { return inner_->y_dim(); }
  Eigen::Index y_dim() const override { return inner_->x_dim(); }
  std::string label() const override { return "mirror(" + inner_->label() + ")"; }
  double value(const Vec& x, const Vec& y) const override { return -inner_->value(y, x); }
  Vec grad_x(const Vec& x, const Vec& y) const override { return -inner_->grad_y(y, x); }
  Vec grad_y(const Vec& x, const Vec& y) const override { return -inner_->grad_x(y, x); }
  Mat hess_xx(const Vec& x, const Vec& y) const override { return -inner_->hess_yy(y, x); }
  Mat hess_xy(const Vec& x, const Vec& y) const override {
    return -inner_->hess_xy(y, x).transpose();
  }
  Mat hess_yy(const Vec& x, const Vec& y) const override { return -inner_->hess_xx(y, x); }

 private:
  OraclePtr inner_;
};

OraclePtr make_quadratic_oracle(const QuadraticGame& game, const std::string& label = "quadratic");

Vec join(const Vec& x, const Vec& y);

}  // namespace minimaxlab
