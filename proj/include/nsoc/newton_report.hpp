#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nsoc {

// Convergence telemetry of a Newton-type iteration. residual_history holds
// the residual norm at every visited iterate, starting with the initial one.
struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;
  std::optional<std::string> failure_reason;

  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

}  // namespace nsoc
