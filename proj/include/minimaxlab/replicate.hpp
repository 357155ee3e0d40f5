#pragma once

#include <functional>
#include <string>
#include <vector>

namespace minimaxlab {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string observed;
};

struct ReplicationCase {
  std::string id;
  std::string description;
  std::string fixture_id;  // registered fixture the case is built on
  std::function<std::vector<Assertion>()> run;
};

struct CaseReport {
  std::string id;
  std::string description;
  bool passed = false;
  std::vector<Assertion> assertions;
};

namespace replicate {

const std::vector<ReplicationCase>& cases();

// Throws UnknownFixture for an unregistered id.
CaseReport run_case(const std::string& id);
std::vector<CaseReport> run_all();

}  // namespace replicate
}  // namespace minimaxlab
