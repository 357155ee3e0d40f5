#pragma once

#include "minimaxlab/oracle.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace minimaxlab {

enum class Family { GDA, HB, NAG, EG, PastEG, OGD };
enum class UpdateMode { Simultaneous, Alternating };

const char* to_string(Family f);
Family family_from_string(const std::string& s);  // throws Parse

struct AlgorithmSpec {
  Family family = Family::GDA;
  double alpha1 = 0.1;
  double alpha2 = 0.1;
  double beta = 0.0;  // momentum (HB, NAG) or extra-gradient ratio (EG, PastEG)
  double k = 2.0;     // OGD coefficient, k > 1
  UpdateMode mode = UpdateMode::Simultaneous;

  // Throws InvalidSpec (or NonPositiveBeta for EG/PastEG).
  void validate() const;
};

struct DynState {
  Vec z;
  std::optional<Vec> z_prev;     // previous iterate (HB, NAG, OGD)
  std::optional<Vec> half_prev;  // previous look-ahead point (PastEG)

  static DynState start(Vec z0);
  static DynState with_history(Vec z, Vec z_prev);
};

struct TrajectoryRecord {
  std::vector<Vec> iterates;
  std::vector<double> vector_field_norms;
  bool converged = false;
  bool diverged = false;
  int iterations_used = 0;
  std::optional<double> final_distance_to_target;

  // Residual stayed above stop_tol over the final 10% of the run.
  bool stagnated(double stop_tol) const;
};

namespace dynamics {

// (-alpha1 df/dx, alpha2 df/dy) at z = (x, y).
Vec vector_field(const GameOracle& f, const Vec& z, double alpha1, double alpha2);

DynState step(const AlgorithmSpec& spec, const GameOracle& f, const DynState& state);

struct SimulateOptions {
  int max_iters = 10000;
  double stop_tol = 1e-8;
  double divergence_bound = 0.0;  // <= 0 selects 1e8 * (1 + |z0|)
  std::optional<Vec> target;
};

TrajectoryRecord simulate(const AlgorithmSpec& spec, const GameOracle& f, const Vec& z0,
                          const SimulateOptions& opts = {});

// Past extra-gradient with ratio beta equals OGD with k = 1 + 1/beta.
double ogd_from_past_eg(double beta);

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec, Eigen::Index x_dim);

}  // namespace dynamics
}  // namespace minimaxlab
