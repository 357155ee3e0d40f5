#include "minimaxlab/replicate.hpp"

#include "minimaxlab/envelope.hpp"
#include "minimaxlab/error.hpp"
#include "minimaxlab/fixtures.hpp"
#include "minimaxlab/optimality.hpp"
#include "minimaxlab/quadratic.hpp"
#include "minimaxlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace minimaxlab::replicate {

namespace {

template <typename T>
std::string show(const T& value) {
  std::ostringstream os;
  os << std::boolalpha << value;
  return os.str();
}

Assertion check(std::string name, bool passed, std::string observed) {
  return {std::move(name), passed, std::move(observed)};
}

Vec point(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

std::vector<Assertion> nc_case() {
  const Fixture& fx = fixture("nc");
  const GridGlobalResult g = grid_global_1d(*fx.oracle, -3.0, 3.0, 0.005);
  bool minimax_at_zero = !g.minimax_x.empty();
  for (double x : g.minimax_x) minimax_at_zero = minimax_at_zero && std::abs(x) <= 0.01;
  bool near_plus = false, near_minus = false, all_near = !g.maximin_points.empty();
  for (const auto& [x, y] : g.maximin_points) {
    const bool plus = std::hypot(x - 1.0, y) <= 0.01, minus = std::hypot(x + 1.0, y) <= 0.01;
    near_plus = near_plus || plus;
    near_minus = near_minus || minus;
    all_near = all_near && (plus || minus);
  }
  return {check("global minimax value 0", std::abs(g.minimax_value) <= 1e-3, show(g.minimax_value)),
          check("minimax attained at x = 0", minimax_at_zero, show(g.minimax_x.size()) + " grid points"),
          check("global maximin value -1/4", std::abs(g.maximin_value + 0.25) <= 1e-3, show(g.maximin_value)),
          check("maximin attained at (1, 0) and (-1, 0)", near_plus && near_minus && all_near,
                show(g.maximin_points.size()) + " grid points")};
}

std::vector<Assertion> lrp_1d_sweep_case() {
  int mismatches = 0, total = 0;
  for (int i = -8; i <= 8; ++i) {
    for (int j = -8; j <= 8; ++j) {
      for (int k = -8; k <= 8; ++k) {
        const double a = 0.25 * i, b = 0.25 * j, c = 0.25 * k;
        const QuadraticGame g = QuadraticGame::homogeneous(Mat::Constant(1, 1, a), Mat::Constant(1, 1, b),
                                                           Mat::Constant(1, 1, c));
        const bool expected = (k == 0 && a >= 0.0 && b <= 0.0) || (k != 0 && c * c >= a * b);
        if (quadratic::classify(g).lrp.exists != expected) ++mismatches;
        ++total;
      }
    }
  }
  return {check("one-dimensional LRP condition table", mismatches == 0,
                show(mismatches) + " mismatches of " + show(total))};
}

std::vector<Assertion> thm_all_case() {
  const Fixture& fx = fixture("no_local_saddle");
  const GameOracle& f = *fx.oracle;
  const ClassificationReport rep = quadratic::classify(*fx.quadratic);
  int unstable_momentum = 0, cells = 0;
  for (double a1 : {0.05, 0.1, 0.5, 1.0}) {
    for (double a2 : {0.05, 0.5, 1.5, 3.0}) {
      for (double beta : {-0.5, 0.0, 0.5}) {
        for (Family fam : {Family::GDA, Family::HB, Family::NAG}) {
          AlgorithmSpec spec{fam, a1, a2, fam == Family::GDA ? 0.0 : beta, 2.0, UpdateMode::Simultaneous};
          if (!stability::exponential_stability(spec, f, fx.x_star, fx.y_star).stable) ++unstable_momentum;
          ++cells;
        }
      }
    }
  }
  const AlgorithmSpec ogd{Family::OGD, 0.1, 2.0, 0.0, 1.01, UpdateMode::Simultaneous};
  const StabilityVerdict ogd_v = stability::exponential_stability(ogd, f, fx.x_star, fx.y_star);
  // The slow root of x^2 - (1 + k lambda) x + lambda tends to 1 as k -> 1+, so allow a long run.
  dynamics::SimulateOptions opts;
  opts.max_iters = 40000;
  const TrajectoryRecord ogd_run = dynamics::simulate(ogd, f, point({0.5, 0.5}), opts);
  const Mat H = stability::jacobian_H(f, fx.x_star, fx.y_star, 0.1, 1.5).H;
  bool eg_limit = true;
  const CVec ev = linalg::general_eig(H);
  for (Eigen::Index i = 0; i < ev.size(); ++i) eg_limit = eg_limit && stability::stable_eg_limit(ev(i));
  const AlgorithmSpec eg_equal{Family::EG, 0.3, 0.3, 1.0, 2.0, UpdateMode::Simultaneous};
  return {check("origin is local and global minimax", rep.local_minimax.exists && rep.global_minimax.exists, ""),
          check("origin is not a saddle", !rep.saddle.exists, ""),
          check("GDA, HB, NAG unstable on the grid", unstable_momentum == cells,
                show(unstable_momentum) + " of " + show(cells) + " unstable"),
          check("EG unstable at equal step sizes",
                !stability::exponential_stability(eg_equal, f, fx.x_star, fx.y_star).stable, ""),
          check("EG limit region stable at (0.1, 1.5)", eg_limit, ""),
          check("OGD(1.01) stable at (0.1, 2)", ogd_v.stable, "rho " + show(ogd_v.spectral_radius_of_update)),
          check("OGD(1.01) simulation converges", ogd_run.converged, show(ogd_run.iterations_used) + " iterations")};
}

std::vector<Assertion> failure_lrp_case() {
  const Fixture& fx = fixture("failure_lrp");
  const ClassificationReport rep = quadratic::classify(*fx.quadratic);
  int stable_cells = 0, marginal_cells = 0, cells = 0;
  for (int i = 1; i <= 15; ++i) {
    for (int j = 1; j <= 15; ++j) {
      for (double k : {1.01, 1.1, 1.5, 2.0, 3.0, 5.0}) {
        const AlgorithmSpec spec{Family::OGD, 0.1 * i, 0.1 * j, 0.0, k, UpdateMode::Simultaneous};
        const StabilityVerdict v = stability::exponential_stability(spec, *fx.oracle, fx.x_star, fx.y_star);
        if (v.marginal) ++marginal_cells;
        else if (v.stable) ++stable_cells;
        ++cells;
      }
    }
  }
  return {check("LRP at the origin", rep.lrp.exists && rep.lrp.set.contains(Vec::Zero(4)), ""),
          check("OGD unstable on every grid cell", stable_cells == 0,
                show(stable_cells) + " stable, " + show(marginal_cells) + " marginal of " + show(cells))};
}

std::vector<Assertion> bilinear_gda_case() {
  const Fixture& fx = fixture("bilinear");
  const Vec z0 = point({0.1, 0.1});
  std::vector<Assertion> out;
  dynamics::SimulateOptions opts;
  opts.max_iters = 10000;
  for (double alpha : {1e-3, 1e-2, 1e-1}) {
    const AlgorithmSpec gda{Family::GDA, alpha, alpha, 0.0, 2.0, UpdateMode::Simultaneous};
    const TrajectoryRecord r = dynamics::simulate(gda, *fx.oracle, z0, opts);
    const double final_norm = r.iterates.back().norm();
    out.push_back(check("GDA does not contract at alpha " + show(alpha), final_norm >= z0.norm() && !r.converged,
                        "final |z| " + show(final_norm)));
  }
  const AlgorithmSpec eg{Family::EG, 0.1, 0.1, 1.0, 2.0, UpdateMode::Simultaneous};
  const TrajectoryRecord r = dynamics::simulate(eg, *fx.oracle, z0, opts);
  out.push_back(check("EG converges", r.iterates.back().norm() < 1e-6, "final |z| " + show(r.iterates.back().norm())));
  return out;
}

std::vector<Assertion> classify_case(const std::string& id, bool minimax, bool maximin, bool saddle, bool lrp) {
  const ClassificationReport r = quadratic::classify(*fixture(id).quadratic);
  auto entry = [](const char* name, bool got, bool want) {
    return check(std::string(name) + (want ? " exists" : " absent"), got == want, show(got));
  };
  return {entry("global minimax", r.global_minimax.exists, minimax),
          entry("global maximin", r.global_maximin.exists, maximin), entry("saddle", r.saddle.exists, saddle),
          entry("LRP", r.lrp.exists, lrp)};
}

std::vector<Assertion> verify_case(const std::string& id, Verdict expected) {
  const Fixture& fx = fixture(id);
  const VerifyResult r = verify_local_minimax(*fx.oracle, fx.x_star, fx.y_star, fx.eps_list, fx.x_radius);
  return {check(std::string("local minimax verdict ") + to_string(expected), r.verdict == expected,
                std::string(to_string(r.verdict)) + " at stage " + r.evidence.stage)};
}

std::vector<Assertion> lrp_verify_case(const std::string& id, Verdict expected) {
  const Fixture& fx = fixture(id);
  LrpOptions opts;
  opts.x_radius = fx.x_radius;
  opts.y_radius = fx.y_radius;
  const VerifyResult r = verify_lrp(fx.oracle, fx.x_star, fx.y_star, fx.eps_list, fx.eps_list, opts);
  return {check(std::string("LRP verdict ") + to_string(expected), r.verdict == expected, to_string(r.verdict))};
}

std::vector<Assertion> critical_case() {
  const Fixture& fx = fixture("rem_higher_order");
  const CriticalPartition p =
      critical_directions(*fx.oracle, fx.x_star, fx.y_star, fx.eps_list, direction_grid(1));
  const double term = second_order_necessary_term(*fx.oracle, fx.x_star, fx.y_star, point({1.0}));
  return {check("every direction critical", p.positive.empty() && p.critical.size() == 2, show(p.critical.size())),
          check("second-order term 6", std::abs(term - 6.0) <= 0.1, show(term))};
}

std::vector<Assertion> counter_jin_case() {
  const Fixture& fx = fixture("counter_jin");
  const CriticalPartition p =
      critical_directions(*fx.oracle, fx.x_star, fx.y_star, fx.eps_list, direction_grid(2, 16));
  bool on_axis = !p.critical.empty();
  for (const Vec& t : p.critical) on_axis = on_axis && std::abs(t(1)) < 1e-9;
  const double term = second_order_necessary_term(*fx.oracle, fx.x_star, fx.y_star, point({1.0, 0.0}));
  return {check("critical directions have t2 = 0", on_axis, show(p.critical.size()) + " critical"),
          check("second-order term 2 along (1, 0)", std::abs(term - 2.0) <= 0.05, show(term))};
}

std::vector<Assertion> second_order_case() {
  const Fixture& sg = fixture("stationary_global_no_local");
  const Fixture& lng = fixture("local_non_global");
  const SecondOrderReport a = optimality::second_order_invertible(*sg.oracle, sg.x_star, sg.y_star);
  const SecondOrderReport b = optimality::second_order_invertible(*lng.oracle, lng.x_star, lng.y_star);
  return {check("necessary condition fails", a.verdict == SecondOrderVerdict::NecessaryFails, to_string(a.verdict)),
          check("strict local minimax", b.verdict == SecondOrderVerdict::SufficientStrictLocalMinimax,
                to_string(b.verdict))};
}

std::vector<ReplicationCase> build() {
  std::vector<ReplicationCase> out;
  out.push_back({"nc", "grid oracle for the global minimax and maximin values", "nc", nc_case});
  out.push_back({"lrp_1d_sweep", "one-dimensional LRP condition against classify", "glp", lrp_1d_sweep_case});
  out.push_back({"thm_all", "two-timescale stability on -x^2 + xy", "no_local_saddle", thm_all_case});
  out.push_back({"failure_lrp", "OGD cannot reach the LRP of the 2D game", "failure_lrp", failure_lrp_case});
  out.push_back({"bilinear_gda", "GDA orbits on xy, EG converges", "bilinear", bilinear_gda_case});
  out.push_back({"no_local_saddle", "minimax without a saddle", "no_local_saddle",
                 []() { return classify_case("no_local_saddle", true, false, false, true); }});
  out.push_back({"bilinear_classify", "bilinear saddle", "bilinear",
                 []() { return classify_case("bilinear", true, true, true, true); }});
  out.push_back({"onedq", "only global minimax", "onedq",
                 []() { return classify_case("onedq", true, false, false, true); }});
  out.push_back({"glp", "LRP that is neither minimax nor maximin", "glp",
                 []() { return classify_case("glp", false, false, false, true); }});
  out.push_back({"separable", "separable game without an LRP", "separable",
                 []() { return classify_case("separable", false, false, false, false); }});
  out.push_back({"kawa_suff", "degenerate local minimax", "kawa_suff",
                 []() { return verify_case("kawa_suff", Verdict::Yes); }});
  out.push_back({"glbstatl", "stationary point that is not local minimax", "glbstatl",
                 []() { return verify_case("glbstatl", Verdict::No); }});
  out.push_back({"glp_verify", "numeric LRP test", "glp", []() { return lrp_verify_case("glp", Verdict::Yes); }});
  out.push_back({"lrp_eps0", "LRP needing the zero radius", "lrp_eps0",
                 []() { return lrp_verify_case("lrp_eps0", Verdict::Yes); }});
  out.push_back({"rem_higher_order", "higher-order critical directions", "rem_higher_order", critical_case});
  out.push_back({"counter_jin", "critical directions in two dimensions", "counter_jin", counter_jin_case});
  out.push_back({"second_order", "invertible second-order tests", "local_non_global", second_order_case});
  return out;
}

}  // namespace

const std::vector<ReplicationCase>& cases() {
  static const std::vector<ReplicationCase> all = build();
  return all;
}

CaseReport run_case(const std::string& id) {
  const auto& all = cases();
  const auto it = std::find_if(all.begin(), all.end(), [&](const ReplicationCase& c) { return c.id == id; });
  if (it == all.end()) throw Error(ErrorKind::UnknownFixture, "no replication case '" + id + "'");
  CaseReport rep;
  rep.id = it->id;
  rep.description = it->description;
  rep.assertions = it->run();
  rep.passed = !rep.assertions.empty() &&
               std::all_of(rep.assertions.begin(), rep.assertions.end(), [](const Assertion& a) { return a.passed; });
  return rep;
}

std::vector<CaseReport> run_all() {
  std::vector<CaseReport> out;
  for (const auto& c : cases()) out.push_back(run_case(c.id));
  return out;
}

}  // namespace minimaxlab::replicate
