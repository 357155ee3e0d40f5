#pragma once

#include "minimaxlab/oracle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minimaxlab {

// A named example game with a reference point and the radii its envelope checks use.
struct Fixture {
  std::string id;
  std::string formula;
  OraclePtr oracle;
  std::optional<QuadraticGame> quadratic;
  Vec x_star;
  Vec y_star;
  std::vector<double> eps_list;
  double x_radius = 0.05;
  double y_radius = 0.05;
};

// Throws UnknownFixture.
const Fixture& fixture(const std::string& id);
std::vector<std::string> fixture_ids();

}  // namespace minimaxlab
