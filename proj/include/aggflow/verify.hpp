#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aggflow {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed value of the checked quantity
  double bound = 0.0;  // acceptance bound on that quantity
  std::string detail;
};

// Randomized invariant suites behind `verify --suite ...`. Deterministic:
// fixed seeds, single-threaded.
std::vector<PropertyResult> verify_ops();
std::vector<PropertyResult> verify_ch();
std::vector<PropertyResult> verify_ns();
std::vector<PropertyResult> verify_energy();

// suite in {"ops", "ch", "ns", "energy", "all"}; throws ValidationError on
// anything else.
std::vector<PropertyResult> verify_suite(const std::string& suite);

}  // namespace aggflow
