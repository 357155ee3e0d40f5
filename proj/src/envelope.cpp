#include "minimaxlab/envelope.hpp"

#include "minimaxlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace minimaxlab {

const char* to_string(Shape s) {
  switch (s) {
    case Shape::L2Ball: return "l2";
    case Shape::LInfBall: return "linf";
    case Shape::Eigenspace: return "eigenspace";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Neighborhood Neighborhood::linf(Vec center, double radius) {
  return of_shape(Shape::LInfBall, std::move(center), radius);
}

Neighborhood Neighborhood::l2(Vec center, double radius) {
  return of_shape(Shape::L2Ball, std::move(center), radius);
}

Neighborhood Neighborhood::eigenspace(Vec center, double radius, const Mat& reference) {
  return of_shape(Shape::Eigenspace, std::move(center), radius, reference);
}

Neighborhood Neighborhood::of_shape(Shape shape, Vec center, double radius, const Mat& reference) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::DimensionMismatch, "neighborhood radius must be finite and nonnegative");
  Neighborhood nb;
  nb.shape = shape;
  nb.radius = radius;
  const Eigen::Index d = center.size();
  nb.center = std::move(center);
  if (shape == Shape::Eigenspace) {
    if (reference.rows() != d || reference.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "eigenspace reference must match the center dimension");
    nb.axes = linalg::sym_eig(reference).eigenvectors;
  } else {
    nb.axes = Mat::Identity(d, d);
  }
  return nb;
}

Vec Neighborhood::to_local(const Vec& y) const { return axes.transpose() * (y - center); }

Vec Neighborhood::from_local(const Vec& c) const { return center + axes * c; }

Vec Neighborhood::project_local(const Vec& c) const {
  if (shape == Shape::L2Ball) {
    const double n = c.norm();
    return n > radius ? Vec(c * (radius / n)) : c;
  }
  return c.cwiseMax(-radius).cwiseMin(radius);
}

bool Neighborhood::contains(const Vec& y, double tol) const {
  const Vec c = to_local(y);
  const double size = shape == Shape::L2Ball ? c.norm() : c.lpNorm<Eigen::Infinity>();
  return size <= radius + tol * (1.0 + radius);
}

namespace {

// Symmetric grid: entry i and N-1-i are exact negatives, so f(x*, .) symmetric fixtures
// see exact ties.
std::vector<double> axis_points(int count, double radius) {
  std::vector<double> pts(count);
  const double denom = count - 1;
  for (int i = 0; i < count; ++i) pts[i] = radius * ((2.0 * i - denom) / denom);
  return pts;
}

std::vector<Vec> local_grid(const Neighborhood& nb, const EnvelopeConfig& cfg) {
  const Eigen::Index d = nb.dim();
  std::vector<Vec> out;
  if (d == 1) {
    for (double c : axis_points(std::max(cfg.grid_1d, 2), nb.radius)) out.push_back(Vec::Constant(1, c));
    return out;
  }
  if (d != 2) throw Error(ErrorKind::UnsupportedDim, "inner maximization supports at most 2 dimensions");
  const int count = std::max(cfg.grid_2d, 2);
  const auto pts = axis_points(count, nb.radius);
  for (double u : pts) {
    for (double v : pts) {
      Vec c(2);
      c << u, v;
      if (nb.shape != Shape::L2Ball || c.norm() <= nb.radius) out.push_back(c);
    }
  }
  if (nb.shape == Shape::L2Ball) {
    const int ring = 4 * count;
    for (int k = 0; k < ring; ++k) {
      const double th = 2.0 * std::numbers::pi * k / ring;
      Vec c(2);
      c << nb.radius * std::cos(th), nb.radius * std::sin(th);
      out.push_back(c);
    }
  }
  return out;
}

struct Exploration {
  double best = -std::numeric_limits<double>::infinity();
  Vec best_local;
  std::vector<Vec> locals;
  std::vector<double> values;
};

// Monotone projected gradient ascent in local coordinates.
void ascend(const GameOracle& f, const Vec& x, const Neighborhood& nb, const EnvelopeConfig& cfg, Vec& c,
            double& fc) {
  double eta = 0.0;
  const double stall = 1e-15 * (1.0 + nb.radius);
  for (int it = 0; it < cfg.ascent_steps; ++it) {
    const Vec g = nb.axes.transpose() * f.grad_y(x, nb.from_local(c));
    const double gn = g.norm();
    if (!(gn > 0.0) || !std::isfinite(gn)) return;
    if (eta == 0.0) eta = cfg.ascent_step * nb.radius / gn;
    bool moved = false;
    for (int h = 0; h < 60; ++h) {
      const Vec cand = nb.project_local(c + eta * g);
      if ((cand - c).norm() <= stall) return;
      const double fv = f.value(x, nb.from_local(cand));
      if (fv > fc) {
        c = cand;
        fc = fv;
        moved = true;
        eta *= 2.0;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) return;
  }
}

Exploration explore(const GameOracle& f, const Vec& x, const Neighborhood& nb, const EnvelopeConfig& cfg) {
  if (nb.dim() != f.y_dim()) throw Error(ErrorKind::DimensionMismatch, "neighborhood does not match y");
  if (x.size() != f.x_dim()) throw Error(ErrorKind::DimensionMismatch, "x does not match the oracle");
  Exploration ex;
  if (nb.radius == 0.0) {
    ex.best_local = Vec::Zero(nb.dim());
    ex.best = f.value(x, nb.center);
    ex.locals.push_back(ex.best_local);
    ex.values.push_back(ex.best);
    return ex;
  }
  ex.locals = local_grid(nb, cfg);
  ex.values.reserve(ex.locals.size());
  for (const Vec& c : ex.locals) ex.values.push_back(f.value(x, nb.from_local(c)));

  std::vector<std::size_t> order(ex.values.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t seeds = std::min<std::size_t>(std::max(cfg.restarts, 1), order.size());
  std::partial_sort(order.begin(), order.begin() + seeds, order.end(),
                    [&](std::size_t i, std::size_t j) { return ex.values[i] > ex.values[j]; });
  for (std::size_t s = 0; s < seeds; ++s) {
    Vec c = ex.locals[order[s]];
    double fc = ex.values[order[s]];
    ascend(f, x, nb, cfg, c, fc);
    ex.locals.push_back(c);
    ex.values.push_back(fc);
  }
  for (std::size_t i = 0; i < ex.values.size(); ++i) {
    if (ex.values[i] > ex.best) {
      ex.best = ex.values[i];
      ex.best_local = ex.locals[i];
    }
  }
  return ex;
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Points in the box |u|_inf <= radius around the origin, spread over dyadic scales
// radius * 2^-k so that violations at small scale are sampled too.
std::vector<Vec> box_samples(Eigen::Index dim, double radius, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec u(dim);
    for (Eigen::Index j = 0; j < dim; ++j) u(j) = unit(rng);
    const double inf = u.lpNorm<Eigen::Infinity>();
    if (inf == 0.0) continue;
    const int level = i % 8;
    out.push_back(u * (radius * std::ldexp(1.0, -level) * mag(rng) / inf));
  }
  return out;
}

}  // namespace

InnerMax inner_max(const GameOracle& f, const Vec& x, const Neighborhood& nbhd, const EnvelopeConfig& cfg) {
  const Exploration ex = explore(f, x, nbhd, cfg);
  return {ex.best, nbhd.from_local(ex.best_local)};
}

double local_envelope(const GameOracle& f, const Vec& x, const Neighborhood& nbhd, const EnvelopeConfig& cfg) {
  return explore(f, x, nbhd, cfg).best;
}

ActiveSetSample active_set(const GameOracle& f, const Vec& x_star, const Neighborhood& nbhd,
                           const EnvelopeConfig& cfg) {
  const Exploration ex = explore(f, x_star, nbhd, cfg);
  ActiveSetSample out;
  out.tolerance = cfg.active_tol * (1.0 + std::abs(ex.best));
  for (std::size_t i = 0; i < ex.values.size(); ++i) {
    if (ex.values[i] < ex.best - out.tolerance) continue;
    const Vec y = nbhd.from_local(ex.locals[i]);
    const bool dup = std::any_of(out.points.begin(), out.points.end(),
                                 [&](const Vec& p) { return (p - y).norm() <= cfg.dedup; });
    if (dup) continue;
    out.points.push_back(y);
    out.values.push_back(ex.values[i]);
  }
  return out;
}

namespace {

double dd_over(const GameOracle& f, const Vec& x_star, const ActiveSetSample& act, const Vec& t) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& y : act.points) best = std::max(best, f.grad_x(x_star, y).dot(t));
  return best;
}

}  // namespace

double danskin_dd(const GameOracle& f, const Vec& x_star, const Neighborhood& nbhd, const Vec& t,
                  const EnvelopeConfig& cfg) {
  if (t.size() != f.x_dim()) throw Error(ErrorKind::DimensionMismatch, "direction does not match x");
  return dd_over(f, x_star, active_set(f, x_star, nbhd, cfg), t);
}

std::vector<Vec> direction_grid(Eigen::Index dim, int count, std::uint64_t seed) {
  std::vector<Vec> out;
  if (dim == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * std::numbers::pi * k / count;
      Vec t(2);
      t << std::cos(th), std::sin(th);
      out.push_back(t);
    }
    return out;
  }
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < count; ++k) {
    Vec t(dim);
    for (Eigen::Index j = 0; j < dim; ++j) t(j) = normal(rng);
    out.push_back(t.normalized());
  }
  return out;
}

CriticalPartition critical_directions(const GameOracle& f, const Vec& x_star, const Vec& y_star,
                                      const std::vector<double>& eps_list, const std::vector<Vec>& directions,
                                      double tol, Shape shape, const EnvelopeConfig& cfg) {
  if (eps_list.empty()) throw Error(ErrorKind::DimensionMismatch, "empty eps list");
  const double eps_max = *std::max_element(eps_list.begin(), eps_list.end());
  const VerifyResult inner = local_max_test(f, x_star, y_star, eps_max, cfg);
  if (inner.verdict == Verdict::No) throw Error(ErrorKind::NotLocalMax, "y_star does not maximize f(x_star, .)");

  std::vector<ActiveSetSample> actives;
  for (double eps : eps_list) {
    const Mat ref = shape == Shape::Eigenspace ? f.hess_yy(x_star, y_star) : Mat();
    actives.push_back(active_set(f, x_star, Neighborhood::of_shape(shape, y_star, eps, ref), cfg));
  }
  std::vector<std::size_t> by_eps(eps_list.size());
  std::iota(by_eps.begin(), by_eps.end(), 0);
  std::sort(by_eps.begin(), by_eps.end(), [&](std::size_t i, std::size_t j) { return eps_list[i] < eps_list[j]; });

  CriticalPartition out;
  for (const Vec& t : directions) {
    std::vector<double> row;
    bool critical = true;
    for (const auto& act : actives) {
      const double dd = dd_over(f, x_star, act, t);
      row.push_back(dd);
      if (!(dd < tol)) critical = false;
    }
    for (std::size_t k = 1; k < by_eps.size(); ++k)
      if (row[by_eps[k - 1]] > row[by_eps[k]] + tol) out.monotone = false;
    (critical ? out.critical : out.positive).push_back(t);
    out.dd.push_back(std::move(row));
  }
  return out;
}

double second_order_necessary_term(const GameOracle& f, const Vec& x_star, const Vec& y_star, const Vec& t,
                                   const ShellConfig& shells) {
  const double base = t.dot(f.hess_xx(x_star, y_star) * t);
  const double f_star = f.value(x_star, y_star);
  const std::vector<Vec> dirs = direction_grid(y_star.size(), shells.angles);
  std::vector<double> shell_max(shells.shells, 0.0);
  double radius = shells.scale * shells.first_radius;
  for (int s = 0; s < shells.shells; ++s, radius *= shells.ratio) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& d : dirs) {
      const Vec z = y_star + radius * d;
      const double slope = std::max(f.grad_x(x_star, z).dot(t), 0.0);
      const double gap = f_star - f.value(x_star, z);
      // Pseudo-inverse of a scalar: 1/gap, or 0 when gap vanishes.
      const double term = gap != 0.0 ? slope * slope / gap : 0.0;
      best = std::max(best, term);
    }
    shell_max[s] = best;
  }
  const int finest = std::clamp(shells.finest, 1, shells.shells);
  const double limsup = *std::max_element(shell_max.end() - finest, shell_max.end());
  const double out = base + 0.5 * limsup;
  return std::isfinite(out) ? out : -std::numeric_limits<double>::infinity();
}

VerifyResult local_max_test(const GameOracle& f, const Vec& x_star, const Vec& y_star, double radius,
                            const EnvelopeConfig& cfg) {
  auto rng = make_rng(cfg.seed);
  const double f_star = f.value(x_star, y_star);
  const double tol = cfg.verify_tol * (1.0 + std::abs(f_star));
  VerifyResult res;
  res.evidence.stage = "inner_max";
  res.evidence.eps = radius;
  double worst = -std::numeric_limits<double>::infinity();
  Vec worst_y = y_star;
  for (const Vec& u : box_samples(y_star.size(), radius, cfg.ball_samples, rng)) {
    const Vec y = y_star + u;
    const double gain = f.value(x_star, y) - f_star;
    if (gain > worst) {
      worst = gain;
      worst_y = y;
    }
  }
  res.evidence.margin = -worst;
  res.evidence.witness_x = x_star;
  res.evidence.witness_y = worst_y;
  if (worst > tol) {
    res.verdict = Verdict::No;
    res.evidence.notes.push_back("f(x*, y) exceeds f(x*, y*)");
  } else if (worst > 0.1 * tol) {
    res.verdict = Verdict::Inconclusive;
    res.evidence.notes.push_back("improvement within tolerance band");
  } else {
    res.verdict = Verdict::Yes;
  }
  return res;
}

VerifyResult envelope_min_test(const GameOracle& f, const Vec& x_star, const Vec& y_star, double eps,
                               double x_radius, Shape shape, const EnvelopeConfig& cfg, const Mat& y_reference) {
  const Mat ref = shape == Shape::Eigenspace && y_reference.size() == 0 ? f.hess_yy(x_star, y_star) : y_reference;
  const Neighborhood nb = Neighborhood::of_shape(shape, y_star, eps, ref);
  const double env_star = local_envelope(f, x_star, nb, cfg);
  const double tol = cfg.verify_tol * (1.0 + std::abs(env_star));
  auto rng = make_rng(cfg.seed + 1);
  VerifyResult res;
  res.evidence.stage = "envelope";
  res.evidence.eps = eps;
  double worst = std::numeric_limits<double>::infinity();
  Vec worst_x = x_star;
  for (const Vec& u : box_samples(x_star.size(), x_radius, cfg.x_samples, rng)) {
    const Vec x = x_star + u;
    const double rise = local_envelope(f, x, nb, cfg) - env_star;
    if (rise < worst) {
      worst = rise;
      worst_x = x;
    }
  }
  res.evidence.margin = worst;
  res.evidence.witness_x = worst_x;
  res.evidence.witness_y = y_star;
  if (worst < -tol) {
    res.verdict = Verdict::No;
    res.evidence.notes.push_back("envelope drops below its value at x*");
  } else if (worst < -0.1 * tol) {
    res.verdict = Verdict::Inconclusive;
    res.evidence.notes.push_back("envelope decrease within tolerance band");
  } else {
    res.verdict = Verdict::Yes;
  }
  return res;
}

VerifyResult verify_local_minimax(const GameOracle& f, const Vec& x_star, const Vec& y_star,
                                  const std::vector<double>& eps_list, double x_radius, const EnvelopeConfig& cfg) {
  if (eps_list.empty()) throw Error(ErrorKind::DimensionMismatch, "empty eps list");
  const double eps_min = *std::min_element(eps_list.begin(), eps_list.end());
  VerifyResult inner = local_max_test(f, x_star, y_star, eps_min, cfg);
  if (inner.verdict == Verdict::No) return inner;
  bool doubtful = inner.verdict == Verdict::Inconclusive;
  VerifyResult last = inner;
  for (double eps : eps_list) {
    VerifyResult r = envelope_min_test(f, x_star, y_star, eps, x_radius, Shape::LInfBall, cfg);
    if (r.verdict == Verdict::No) return r;
    if (r.verdict == Verdict::Inconclusive) {
      doubtful = true;
      last = r;
    } else if (!doubtful) {
      last = r;
    }
  }
  last.verdict = doubtful ? Verdict::Inconclusive : Verdict::Yes;
  return last;
}

namespace {

struct SideResult {
  Verdict verdict = Verdict::Inconclusive;
  VerifyResult detail;
  std::string note;
};

SideResult envelope_side(const GameOracle& f, const Vec& x_star, const Vec& y_star, std::vector<double> eps_list,
                         double radius, Shape shape, const Mat& reference, const EnvelopeConfig& cfg,
                         const char* side) {
  std::sort(eps_list.begin(), eps_list.end());
  eps_list.erase(std::remove_if(eps_list.begin(), eps_list.end(), [](double e) { return e <= 0.0; }),
                 eps_list.end());
  SideResult out;
  const VerifyResult at_zero = envelope_min_test(f, x_star, y_star, 0.0, radius, shape, cfg, reference);
  std::vector<VerifyResult> positive;
  for (double e : eps_list) positive.push_back(envelope_min_test(f, x_star, y_star, e, radius, shape, cfg, reference));
  const bool all_positive = !positive.empty() && std::all_of(positive.begin(), positive.end(), [](const auto& r) {
    return r.verdict == Verdict::Yes;
  });
  if (at_zero.verdict == Verdict::Yes) {
    out.verdict = Verdict::Yes;
    out.detail = at_zero;
    out.note = std::string(side) + " side passes at radius 0";
  } else if (all_positive) {
    out.verdict = Verdict::Yes;
    out.detail = positive.front();
    out.note = std::string(side) + " side passes for every positive radius";
  } else if (at_zero.verdict == Verdict::No && (positive.empty() || positive.front().verdict == Verdict::No)) {
    out.verdict = Verdict::No;
    out.detail = positive.empty() ? at_zero : positive.front();
    out.note = std::string(side) + " side fails at radius 0 and at the smallest positive radius";
  } else {
    out.detail = at_zero;
    out.note = std::string(side) + " side undecided";
  }
  return out;
}

}  // namespace

VerifyResult verify_lrp(const OraclePtr& f, const Vec& x_star, const Vec& y_star, const std::vector<double>& eps_list,
                        const std::vector<double>& delta_list, const LrpOptions& opts, const EnvelopeConfig& cfg) {
  const SideResult xs = envelope_side(*f, x_star, y_star, eps_list, opts.x_radius, opts.shape, opts.y_reference,
                                      cfg, "x");
  const MirrorOracle mirrored(f);
  // Lower envelope of f in y is minus the upper envelope of the mirror.
  const SideResult ys = envelope_side(mirrored, y_star, x_star, delta_list, opts.y_radius, opts.shape,
                                      opts.x_reference, cfg, "y");
  VerifyResult out;
  if (xs.verdict == Verdict::No) {
    out = xs.detail;
    out.verdict = Verdict::No;
  } else if (ys.verdict == Verdict::No) {
    out = ys.detail;
    out.evidence.witness_x.swap(out.evidence.witness_y);
    out.verdict = Verdict::No;
  } else {
    out = xs.detail;
    out.verdict = xs.verdict == Verdict::Yes && ys.verdict == Verdict::Yes ? Verdict::Yes : Verdict::Inconclusive;
  }
  out.evidence.stage = "lrp";
  out.evidence.notes.push_back(xs.note);
  out.evidence.notes.push_back(ys.note);
  return out;
}

GridGlobalResult grid_global_1d(const GameOracle& f, double lo, double hi, double step, double tol) {
  if (f.x_dim() != 1 || f.y_dim() != 1) throw Error(ErrorKind::UnsupportedDim, "grid oracle needs a 1+1 game");
  const int count = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  std::vector<double> axis(count);
  for (int i = 0; i < count; ++i) axis[i] = lo + i * step;
  Mat vals(count, count);
  Vec x(1), y(1);
  for (int i = 0; i < count; ++i) {
    x(0) = axis[i];
    for (int j = 0; j < count; ++j) {
      y(0) = axis[j];
      vals(i, j) = f.value(x, y);
    }
  }
  GridGlobalResult out;
  const Vec upper = vals.rowwise().maxCoeff();
  const Vec lower = vals.colwise().minCoeff().transpose();
  out.minimax_value = upper.minCoeff();
  out.maximin_value = lower.maxCoeff();
  const double tmin = tol * (1.0 + std::abs(out.minimax_value));
  const double tmax = tol * (1.0 + std::abs(out.maximin_value));
  for (int i = 0; i < count; ++i)
    if (upper(i) <= out.minimax_value + tmin) out.minimax_x.push_back(axis[i]);
  for (int j = 0; j < count; ++j) {
    if (lower(j) < out.maximin_value - tmax) continue;
    for (int i = 0; i < count; ++i)
      if (vals(i, j) <= lower(j) + tmax) out.maximin_points.emplace_back(axis[i], axis[j]);
  }
  return out;
}

}  // namespace minimaxlab
