#include "minimaxlab/dynamics.hpp"

#include "minimaxlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace minimaxlab {

const char* to_string(Family f) {
  switch (f) {
    case Family::GDA: return "gda";
    case Family::HB: return "hb";
    case Family::NAG: return "nag";
    case Family::EG: return "eg";
    case Family::PastEG: return "pasteg";
    case Family::OGD: return "ogd";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::GDA, Family::HB, Family::NAG, Family::EG, Family::PastEG, Family::OGD})
    if (s == to_string(f)) return f;
  throw Error(ErrorKind::Parse, "unknown algorithm family '" + s + "'");
}

void AlgorithmSpec::validate() const {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2))
    throw Error(ErrorKind::InvalidSpec, "step sizes must be positive and finite");
  if ((family == Family::EG || family == Family::PastEG) && !(beta > 0.0))
    throw Error(ErrorKind::NonPositiveBeta, "extra-gradient ratio must be positive");
  if (family == Family::OGD && !(k > 1.0)) throw Error(ErrorKind::InvalidSpec, "OGD needs k > 1");
  if (!std::isfinite(beta) || !std::isfinite(k)) throw Error(ErrorKind::InvalidSpec, "non-finite parameter");
  if (mode == UpdateMode::Alternating && family != Family::GDA && family != Family::OGD)
    throw Error(ErrorKind::InvalidSpec, "alternating updates exist for GDA and OGD only");
}

DynState DynState::start(Vec z0) {
  DynState s;
  s.z = std::move(z0);
  return s;
}

DynState DynState::with_history(Vec z, Vec z_prev) {
  DynState s;
  s.z = std::move(z);
  s.z_prev = std::move(z_prev);
  return s;
}

bool TrajectoryRecord::stagnated(double stop_tol) const {
  if (vector_field_norms.empty()) return false;
  const std::size_t tail = std::max<std::size_t>(1, vector_field_norms.size() / 10);
  const auto first = vector_field_norms.end() - static_cast<std::ptrdiff_t>(tail);
  return *std::min_element(first, vector_field_norms.end()) > stop_tol;
}

namespace dynamics {

namespace {

struct Split {
  Vec x, y;
};

Split split(const GameOracle& f, const Vec& z) {
  if (z.size() != f.x_dim() + f.y_dim()) throw Error(ErrorKind::DimensionMismatch, "z does not match the oracle");
  return {z.head(f.x_dim()), z.tail(f.y_dim())};
}

Vec alternating_gda(const AlgorithmSpec& s, const GameOracle& f, const Vec& z) {
  const auto [x, y] = split(f, z);
  const Vec x_next = x - s.alpha1 * f.grad_x(x, y);
  const Vec y_next = y + s.alpha2 * f.grad_y(x_next, y);
  return join(x_next, y_next);
}

Vec alternating_ogd(const AlgorithmSpec& s, const GameOracle& f, const Vec& z, const Vec& z_prev) {
  const auto [x, y] = split(f, z);
  const auto [xp, yp] = split(f, z_prev);
  const Vec x_next = x - s.k * s.alpha1 * f.grad_x(x, y) + s.alpha1 * f.grad_x(xp, yp);
  const Vec y_next = y + s.k * s.alpha2 * f.grad_y(x_next, y) - s.alpha2 * f.grad_y(x, yp);
  return join(x_next, y_next);
}

}  // namespace

Vec vector_field(const GameOracle& f, const Vec& z, double alpha1, double alpha2) {
  const auto [x, y] = split(f, z);
  return join(-alpha1 * f.grad_x(x, y), alpha2 * f.grad_y(x, y));
}

DynState step(const AlgorithmSpec& spec, const GameOracle& f, const DynState& state) {
  const double a1 = spec.alpha1;
  const double a2 = spec.alpha2;
  auto v = [&](const Vec& z) { return vector_field(f, z, a1, a2); };
  const Vec& z = state.z;
  DynState next;

  if (spec.mode == UpdateMode::Alternating) {
    if (spec.family == Family::OGD && state.z_prev) {
      next.z = alternating_ogd(spec, f, z, *state.z_prev);
    } else {
      next.z = alternating_gda(spec, f, z);
    }
    next.z_prev = z;
    return next;
  }

  switch (spec.family) {
    case Family::GDA:
      next.z = z + v(z);
      break;
    case Family::HB:
      next.z = z + v(z);
      if (state.z_prev) next.z += spec.beta * (z - *state.z_prev);
      break;
    case Family::NAG: {
      const Vec look = state.z_prev ? Vec(z + spec.beta * (z - *state.z_prev)) : z;
      next.z = look + v(look);
      break;
    }
    case Family::EG:
      next.z = z + v(z + v(z)) / spec.beta;
      break;
    case Family::PastEG: {
      const Vec half = z + (state.half_prev ? v(*state.half_prev) : v(z));
      next.z = z + v(half) / spec.beta;
      next.half_prev = half;
      break;
    }
    case Family::OGD:
      next.z = state.z_prev ? Vec(z + spec.k * v(z) - v(*state.z_prev)) : Vec(z + v(z));
      break;
  }
  next.z_prev = z;
  return next;
}

TrajectoryRecord simulate(const AlgorithmSpec& spec, const GameOracle& f, const Vec& z0, const SimulateOptions& opts) {
  spec.validate();
  if (!z0.allFinite()) throw Error(ErrorKind::NonFinite, "z0");
  const double bound = opts.divergence_bound > 0.0 ? opts.divergence_bound : 1e8 * (1.0 + z0.norm());
  TrajectoryRecord rec;
  DynState state = DynState::start(z0);
  auto record = [&](const Vec& z) {
    rec.iterates.push_back(z);
    const double vn = vector_field(f, z, spec.alpha1, spec.alpha2).norm();
    rec.vector_field_norms.push_back(vn);
    return vn;
  };
  double vn = record(state.z);
  for (int it = 0; it < opts.max_iters; ++it) {
    if (vn <= opts.stop_tol) {
      rec.converged = true;
      break;
    }
    state = step(spec, f, state);
    rec.iterations_used = it + 1;
    if (!state.z.allFinite() || state.z.norm() >= bound) {
      rec.diverged = true;
      rec.iterates.push_back(state.z);
      rec.vector_field_norms.push_back(std::numeric_limits<double>::infinity());
      break;
    }
    vn = record(state.z);
  }
  if (!rec.converged && !rec.diverged && vn <= opts.stop_tol) rec.converged = true;
  if (opts.target) rec.final_distance_to_target = (rec.iterates.back() - *opts.target).norm();
  return rec;
}

double ogd_from_past_eg(double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::NonPositiveBeta, "beta must be positive");
  return 1.0 + 1.0 / beta;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec, Eigen::Index x_dim) {
  const Eigen::Index dim = rec.iterates.empty() ? x_dim : rec.iterates.front().size();
  os << "iter";
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i < x_dim) os << ",x" << i + 1;
    else os << ",y" << i - x_dim + 1;
  }
  os << ",vnorm\n";
  os << std::setprecision(17);
  for (std::size_t t = 0; t < rec.iterates.size(); ++t) {
    os << t;
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << rec.iterates[t](i);
    os << ',' << rec.vector_field_norms[t] << '\n';
  }
}

}  // namespace dynamics
}  // namespace minimaxlab
