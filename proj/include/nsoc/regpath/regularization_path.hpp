#pragma once

#include "nsoc/kkt/kkt_solver.hpp"
#include "nsoc/newton_report.hpp"
#include "nsoc/state/state_solver.hpp"

#include <utility>
#include <vector>

namespace nsoc::regpath {

using fe::FeFunction;
using fe::Index;
using fe::Vector;

struct StateAdjoint {
  FeFunction y;
  FeFunction p;
};

struct RegPathConfig {
  std::vector<double> eps_schedule{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double tol_residual = 1e-12;
  int max_iter = 50;
  bool warm_start = true;

  // Throws ConfigError unless the schedule is non-empty, positive and
  // strictly decreasing.
  void validate() const;
};

// Stacked residual of the smoothed optimality system
//   A y + D max_eps(y) + (1/alpha) M p - M f
//   A p + D (max_eps'(y) .* p) - M (y - y_d)
Vector regularized_residual(const kkt::ProblemData& data, double eps, const StateAdjoint& point);

// Newton on the smoothed system with Jacobian
//   [ A + D diag(max_eps'(y))             (1/alpha) M              ]
//   [ -M + D diag(max_eps''(y) .* p)      A + D diag(max_eps'(y))  ]
std::pair<StateAdjoint, NewtonReport> solve_regularized_kkt(const kkt::ProblemData& data, double eps,
                                                            const StateAdjoint& init,
                                                            const RegPathConfig& cfg = {});

struct PathStep {
  double eps = 0.0;
  NewtonReport report;
  bool cold_restart = false;
  double limit_residual = 0.0;  // norm of the limit-system residual at (y, p, max_eps'(y))
};

struct PathReport {
  std::vector<PathStep> steps;
  bool completed = false;
  std::string failure_reason;

  // Fraction of consecutive pairs along which limit_residual does not grow.
  double decreasing_fraction() const;
};

// Walks the schedule, warm-starting each solve from the previous (y, p). A
// failed step is retried once from zero; a second failure aborts the path.
// Returns (y, p, max_eps'(y)) at the last successful eps.
std::pair<kkt::KktPoint, PathReport> run_path(const kkt::ProblemData& data, const RegPathConfig& cfg);

struct RegularizationRateReport {
  std::vector<double> eps;
  std::vector<double> gaps;  // ||S_eps(u) - S(u)||_L2
  double slope = 0.0;
  bool degenerate = false;   // some gap is exactly zero; slope undefined
};

// Needs at least three eps values spanning two decades (ConfigError
// otherwise); throws SolverFailure if a state solve fails.
RegularizationRateReport verify_regularization_rate(const state::StateProblem& prob, const FeFunction& u,
                                  const std::vector<double>& eps_list);

}  // namespace nsoc::regpath
