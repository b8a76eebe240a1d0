#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsoc::harness {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick property suites on small meshes: prox resolvent identity, smoothing
// assumptions, kernel equivalence, Lipschitz bound of the state map,
// finite-difference derivative check and a small KKT solve. Prints one line
// per suite to out.
std::vector<SelftestResult> run_selftest(std::ostream& out);

}  // namespace nsoc::harness
