// Command-line front end: classify, check, stability, region, simulate, schur, replicate.

#include "minimaxlab/dynamics.hpp"
#include "minimaxlab/envelope.hpp"
#include "minimaxlab/error.hpp"
#include "minimaxlab/fixtures.hpp"
#include "minimaxlab/io.hpp"
#include "minimaxlab/optimality.hpp"
#include "minimaxlab/quadratic.hpp"
#include "minimaxlab/replicate.hpp"
#include "minimaxlab/stability.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace minimaxlab;
using io::Json;

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitUnknownFixture = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kExitParse;
    case ErrorKind::DimensionMismatch: return kExitDimension;
    case ErrorKind::UnknownFixture: return kExitUnknownFixture;
    default: return kExitFailure;
  }
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

void emit(const Json& j) { std::cout << io::canonical_dump(j) << '\n'; }

int env_threads() {
  if (const char* s = std::getenv("MINIMAXLAB_THREADS")) {
    try {
      return std::max(1, std::stoi(s));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "MINIMAXLAB_THREADS must be an integer");
    }
  }
  return 1;
}

// Game source shared by stability and simulate: a registered fixture or a game file.
struct Source {
  std::string fixture_id;
  std::string game_file;
  std::vector<double> point;

  void attach(CLI::App* cmd) {
    auto* fx = cmd->add_option("--fixture", fixture_id, "registered fixture id");
    auto* gf = cmd->add_option("--game", game_file, "quadratic game JSON file");
    fx->excludes(gf);
    cmd->add_option("--point", point, "evaluation point x..., y... (comma separated)")->delimiter(',');
  }

  struct Loaded {
    OraclePtr oracle;
    Vec x, y;
  };

  Loaded load() const {
    Loaded out;
    if (!fixture_id.empty()) {
      const Fixture& fx = fixture(fixture_id);
      out.oracle = fx.oracle;
      out.x = fx.x_star;
      out.y = fx.y_star;
    } else if (!game_file.empty()) {
      const QuadraticGame g = io::game_from_file(game_file);
      out.oracle = make_quadratic_oracle(g, game_file);
      const AffineSet st = quadratic::stationary_set(g);
      const Vec z = st.empty ? Vec::Zero(g.n() + g.m()) : st.basepoint;
      out.x = z.head(g.n());
      out.y = z.tail(g.m());
    } else {
      throw Error(ErrorKind::Parse, "one of --fixture or --game is required");
    }
    if (!point.empty()) {
      const Eigen::Index n = out.oracle->x_dim(), m = out.oracle->y_dim();
      if (static_cast<Eigen::Index>(point.size()) != n + m)
        throw Error(ErrorKind::DimensionMismatch, "--point needs " + std::to_string(n + m) + " coordinates");
      const Vec z = to_vec(point);
      out.x = z.head(n);
      out.y = z.tail(m);
    }
    return out;
  }
};

struct AlgoOptions {
  std::string family = "gda";
  double alpha1 = 0.1, alpha2 = 0.1, beta = 0.0, k = 2.0;
  bool alternating = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--algo", family, "gda, hb, nag, eg, pasteg or ogd")->capture_default_str();
    cmd->add_option("--alpha1", alpha1, "x step size")->capture_default_str();
    cmd->add_option("--alpha2", alpha2, "y step size")->capture_default_str();
    cmd->add_option("--beta", beta, "momentum (hb, nag) or extra-gradient ratio (eg, pasteg)")->capture_default_str();
    cmd->add_option("--k", k, "OGD coefficient, > 1")->capture_default_str();
    cmd->add_flag("--alternating", alternating, "alternating updates (gda, ogd)");
  }

  AlgorithmSpec spec() const {
    AlgorithmSpec s;
    s.family = family_from_string(family);
    s.alpha1 = alpha1;
    s.alpha2 = alpha2;
    s.beta = beta;
    s.k = k;
    s.mode = alternating ? UpdateMode::Alternating : UpdateMode::Simultaneous;
    s.validate();
    return s;
  }
};

// "gda", "eg:1", "eg:inf", "ogd:1+", "hb:0.4".
RegionSpec parse_region(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string param = colon == std::string::npos ? "" : text.substr(colon + 1);
  RegionSpec r;
  r.family = family_from_string(name);
  if (r.family == Family::GDA) return r;
  if (param.empty()) throw Error(ErrorKind::Parse, "region '" + text + "' needs a parameter");
  if ((r.family == Family::EG && param == "inf") || (r.family == Family::OGD && param == "1+")) {
    r.limit = true;
    r.param = r.family == Family::OGD ? 1.0 : 0.0;
    return r;
  }
  try {
    r.param = std::stod(param);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad region parameter '" + param + "'");
  }
  return r;
}

Json report_json(const CaseReport& r) {
  Json asserts = Json::array();
  for (const auto& a : r.assertions) asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"observed", a.observed}});
  return {{"id", r.id}, {"description", r.description}, {"passed", r.passed}, {"assertions", asserts}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax solution concepts and gradient-algorithm stability for smooth games"};
  app.require_subcommand(1);
  std::uint64_t seed = 42;
  int threads = 0;
  app.add_option("--seed", seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (default: MINIMAXLAB_THREADS or 1)");

  // classify
  auto* classify = app.add_subcommand("classify", "classify a quadratic game from JSON");
  std::string game_file;
  double classify_tol = quadratic::kDefaultTol;
  classify->add_option("game", game_file, "game JSON file")->required();
  classify->add_option("--tol", classify_tol, "eigenvalue tolerance (scaled by max(1, |K|_F))")->capture_default_str();

  // check
  auto* check = app.add_subcommand("check", "numeric optimality check at a fixture point");
  std::string check_fixture, concept_name = "minimax", shape_name = "linf";
  std::vector<double> check_point, eps_list;
  double x_radius = -1.0, y_radius = -1.0;
  EnvelopeConfig env_cfg;
  check->add_option("fixture", check_fixture, "fixture id")->required();
  check->add_option("--concept", concept_name, "saddle, minimax, maximin, lrp or second-order")
      ->check(CLI::IsMember({"saddle", "minimax", "maximin", "lrp", "second-order"}))
      ->capture_default_str();
  check->add_option("--point", check_point, "point x..., y... (default: fixture point)")->delimiter(',');
  check->add_option("--eps", eps_list, "envelope radii (default: fixture list)")->delimiter(',');
  check->add_option("--x-radius", x_radius, "x sampling radius (default: fixture value)");
  check->add_option("--y-radius", y_radius, "y sampling radius (default: fixture value)");
  check->add_option("--shape", shape_name, "neighborhood shape for lrp: linf, l2, eigenspace")
      ->check(CLI::IsMember({"linf", "l2", "eigenspace"}))
      ->capture_default_str();
  check->add_option("--verify-tol", env_cfg.verify_tol, "relative tolerance of sampled checks")->capture_default_str();
  check->add_option("--grid-1d", env_cfg.grid_1d, "inner grid points for 1D y")->capture_default_str();
  check->add_option("--grid-2d", env_cfg.grid_2d, "inner grid points per axis for 2D y")->capture_default_str();
  check->add_option("--x-samples", env_cfg.x_samples, "x samples per envelope test")->capture_default_str();

  // stability
  auto* stab = app.add_subcommand("stability", "exponential stability of an algorithm at a point");
  Source stab_src;
  AlgoOptions stab_algo;
  stab_src.attach(stab);
  stab_algo.attach(stab);

  // region
  auto* region = app.add_subcommand("region", "rasterize stability regions in the lambda-plane to CSV");
  std::vector<std::string> region_specs;
  std::vector<double> window_vals{-2.5, 0.5, -1.5, 1.5};
  int resolution = 801;
  double default_beta = 0.4;
  std::string region_out;
  region->add_option("--algo", region_specs, "regions like gda, eg:1, eg:inf, ogd:2, ogd:1+, hb:0.4 (repeatable)");
  region->add_option("--window", window_vals, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4)
      ->capture_default_str();
  region->add_option("--res", resolution, "pixels per axis, >= 2")->capture_default_str();
  region->add_option("--beta", default_beta, "momentum for the default hb/nag columns")->capture_default_str();
  region->add_option("--out", region_out, "CSV path (default: stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run an algorithm from z0");
  Source sim_src;
  AlgoOptions sim_algo;
  std::vector<double> z0;
  dynamics::SimulateOptions sim_opts;
  std::string sim_format = "json", sim_out;
  sim_src.attach(sim);
  sim_algo.attach(sim);
  sim->add_option("--z0", z0, "initial point")->delimiter(',')->required();
  sim->add_option("--max-iters", sim_opts.max_iters, "iteration cap")->capture_default_str();
  sim->add_option("--stop-tol", sim_opts.stop_tol, "stop when |v(z)| <= tol")->capture_default_str();
  sim->add_option("--divergence-bound", sim_opts.divergence_bound, "<= 0 selects 1e8 (1 + |z0|)")
      ->capture_default_str();
  sim->add_option("--format", sim_format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sim->add_option("--out", sim_out, "output path (default: stdout)");

  // schur
  auto* schur = app.add_subcommand("schur", "are all polynomial roots inside the unit disc");
  std::vector<double> coeffs;
  schur->add_option("coeffs", coeffs, "coefficients, leading first")->required()->delimiter(',');

  // replicate
  auto* rep = app.add_subcommand("replicate", "rerun the worked examples");
  std::string case_id;
  bool rep_all = false, rep_json = false;
  rep->add_option("case", case_id, "case id");
  rep->add_flag("--all", rep_all, "run every case");
  rep->add_flag("--json", rep_json, "JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (threads <= 0) threads = env_threads();
    env_cfg.seed = seed;

    if (*classify) {
      const QuadraticGame g = io::game_from_file(game_file);
      emit(io::to_json(quadratic::classify(g, classify_tol)));
      return 0;
    }

    if (*check) {
      const Fixture& fx = fixture(check_fixture);
      Vec x = fx.x_star, y = fx.y_star;
      if (!check_point.empty()) {
        const Eigen::Index n = fx.oracle->x_dim(), m = fx.oracle->y_dim();
        if (static_cast<Eigen::Index>(check_point.size()) != n + m)
          throw Error(ErrorKind::DimensionMismatch, "--point needs " + std::to_string(n + m) + " coordinates");
        const Vec z = to_vec(check_point);
        x = z.head(n);
        y = z.tail(m);
      }
      const std::vector<double> eps = eps_list.empty() ? fx.eps_list : eps_list;
      const double xr = x_radius > 0.0 ? x_radius : fx.x_radius;
      const double yr = y_radius > 0.0 ? y_radius : fx.y_radius;
      Json out = {{"fixture", fx.id}, {"formula", fx.formula}, {"concept", concept_name},
                  {"point", io::to_json(join(x, y))}};
      if (concept_name == "minimax") {
        out["result"] = io::to_json(verify_local_minimax(*fx.oracle, x, y, eps, xr, env_cfg));
      } else if (concept_name == "maximin") {
        const MirrorOracle mirrored(fx.oracle);
        VerifyResult r = verify_local_minimax(mirrored, y, x, eps, yr, env_cfg);
        r.evidence.witness_x.swap(r.evidence.witness_y);
        out["result"] = io::to_json(r);
      } else if (concept_name == "saddle") {
        out["result"] = io::to_json(optimality::local_saddle_check(*fx.oracle, x, y, std::min(xr, yr), env_cfg));
      } else if (concept_name == "lrp") {
        LrpOptions opts;
        opts.x_radius = xr;
        opts.y_radius = yr;
        opts.shape = shape_name == "l2" ? Shape::L2Ball : shape_name == "eigenspace" ? Shape::Eigenspace : Shape::LInfBall;
        out["result"] = io::to_json(verify_lrp(fx.oracle, x, y, eps, eps, opts, env_cfg));
      } else {
        out["result"] = io::to_json(optimality::second_order_invertible(*fx.oracle, x, y));
      }
      emit(out);
      return 0;
    }

    if (*stab) {
      const auto src = stab_src.load();
      const AlgorithmSpec spec = stab_algo.spec();
      Json out = io::to_json(stability::exponential_stability(spec, *src.oracle, src.x, src.y));
      const FirstOrderReport first = optimality::first_order_check(*src.oracle, src.x, src.y);
      if (!first.stationary) out["warnings"].push_back("point is not stationary; linearization is local only");
      out["algorithm"] = {{"family", to_string(spec.family)}, {"alpha1", spec.alpha1}, {"alpha2", spec.alpha2},
                          {"beta", spec.beta}, {"k", spec.k}, {"alternating", stab_algo.alternating}};
      emit(out);
      return 0;
    }

    if (*region) {
      if (resolution < 2) throw Error(ErrorKind::InvalidSpec, "--res must be at least 2");
      const stability::Window window{window_vals[0], window_vals[1], window_vals[2], window_vals[3]};
      std::vector<RegionSpec> specs;
      std::vector<std::string> names;
      if (region_specs.empty()) {
        specs = {{Family::GDA, 0.0, false}, {Family::EG, 1.0, false}, {Family::OGD, 2.0, false},
                 {Family::HB, default_beta, false}, {Family::NAG, default_beta, false}};
        names = {"gda", "eg_b1", "ogd_k2", "hb_b", "nag_b"};
      } else {
        for (const auto& text : region_specs) {
          specs.push_back(parse_region(text));
          names.push_back(specs.back().label());
        }
      }
      std::vector<stability::RegionRaster> rasters;
      for (const auto& s : specs) rasters.push_back(stability::region_raster(s, window, resolution, resolution, threads));
      if (region_out.empty()) {
        stability::write_region_csv(std::cout, rasters, names);
      } else {
        std::ofstream os(region_out);
        if (!os) throw Error(ErrorKind::InvalidSpec, "cannot write " + region_out);
        stability::write_region_csv(os, rasters, names);
      }
      return 0;
    }

    if (*sim) {
      const auto src = sim_src.load();
      const AlgorithmSpec spec = sim_algo.spec();
      const Vec start = to_vec(z0);
      if (start.size() != src.oracle->x_dim() + src.oracle->y_dim())
        throw Error(ErrorKind::DimensionMismatch, "--z0 does not match the game");
      sim_opts.target = join(src.x, src.y);
      const TrajectoryRecord rec = dynamics::simulate(spec, *src.oracle, start, sim_opts);
      std::ofstream file;
      if (!sim_out.empty()) {
        file.open(sim_out);
        if (!file) throw Error(ErrorKind::InvalidSpec, "cannot write " + sim_out);
      }
      std::ostream& os = sim_out.empty() ? std::cout : file;
      if (sim_format == "csv") {
        dynamics::write_trajectory_csv(os, rec, src.oracle->x_dim());
      } else {
        os << io::canonical_dump(io::to_json(rec)) << '\n';
      }
      return 0;
    }

    if (*schur) {
      const bool stable = stability::schur_real(coeffs);
      emit({{"coeffs", coeffs}, {"roots", io::to_json(linalg::poly_roots(coeffs))}, {"stable", stable}});
      return 0;
    }

    if (*rep) {
      std::vector<CaseReport> reports;
      if (rep_all || case_id.empty()) {
        reports = replicate::run_all();
      } else {
        reports.push_back(replicate::run_case(case_id));
      }
      bool all_passed = true;
      for (const auto& r : reports) all_passed = all_passed && r.passed;
      if (rep_json) {
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(report_json(r));
        emit({{"cases", arr}, {"passed", all_passed}});
      } else {
        for (const auto& r : reports) {
          std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << "  " << r.description << '\n';
          for (const auto& a : r.assertions)
            std::cout << "    [" << (a.passed ? "ok" : "x ") << "] " << a.name
                      << (a.observed.empty() ? "" : " (" + a.observed + ")") << '\n';
        }
      }
      return all_passed ? 0 : kExitFailure;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
