#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curvreal {

// First offending coefficient of a failed identity, for reports and error
// messages. Indices and exponents are 1-based here: witnesses are
// external-facing.
struct CoefficientWitness {
  std::vector<int> component;  // tensor indices of the offending entry
  std::vector<int> exponents;  // monomial of the offending coefficient
  std::string expected;
  std::string got;
  friend bool operator==(const CoefficientWitness&, const CoefficientWitness&) = default;
};

struct Verdict {
  std::string name;
  bool pass = false;
  // Highest total degree through which the identity was confirmed.
  int verified_degree = 0;
  std::optional<CoefficientWitness> witness;
  // Auxiliary exact values and derived sub-verdicts, keyed by name.
  std::map<std::string, std::string> notes;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

}  // namespace curvreal
