#pragma once

#include "nsoc/fe/operators.hpp"
#include "nsoc/newton_report.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace nsoc::state {

using fe::FeFunction;
using fe::FeOperators;
using fe::Index;
using fe::Vector;

// Discrete state equation  A y + D max(0, y) = M (u + f).
struct StateProblem {
  std::shared_ptr<const FeOperators> ops;
  FeFunction f;

  StateProblem(std::shared_ptr<const FeOperators> ops, FeFunction f);
  // f = 0
  explicit StateProblem(std::shared_ptr<const FeOperators> ops);
};

struct NewtonOptions {
  int max_iter = 50;
  // Converged when ||F(y)||_2 <= rel_tol * max(1, ||rhs||_2).
  double rel_tol = 1e-12;
};

// Absolute nodal band for membership in {y = 0}.
inline constexpr double kDefaultZeroTol = 1e-12;

// Semi-smooth Newton from y = 0 with generalized Jacobian A + D diag(1_{y>0}).
std::pair<FeFunction, NewtonReport> solve_state(const StateProblem& prob, const FeFunction& u,
                                                const NewtonOptions& opts = {});

// Same with max replaced by the C^1 spline of width eps; Jacobian
// A + D diag(max_eps'(y)). Steps are halved while they fail to reduce the
// residual, since the spline Jacobian can overshoot for very small eps.
std::pair<FeFunction, NewtonReport> solve_state_regularized(const StateProblem& prob, const FeFunction& u,
                                                            double eps, const NewtonOptions& opts = {});

// Directional derivative of the control-to-state map at the state y in
// direction h: solves
//   A d + D (1_{|y|<=tol} max(0, d) + 1_{y>tol} d) = M h.
std::pair<FeFunction, NewtonReport> directional_derivative(const StateProblem& prob, const FeFunction& y,
                                                           const FeFunction& h,
                                                           double zero_tol = kDefaultZeroTol,
                                                           const NewtonOptions& opts = {});

struct FiniteDifferenceReport {
  std::vector<double> steps;
  std::vector<double> errors;  // ||(S(u+th) - S(u))/t - d||_L2 per step
  double derivative_norm = 0.0;
  bool monotone = false;       // non-increasing within 10% slack plus a round-off floor
  bool small_at_min_step = false;  // errors.back() <= 1e-4 (1 + ||d||)

  bool passed() const noexcept { return monotone && small_at_min_step; }
};

// t_list must be positive and strictly decreasing. Throws SolverFailure when a
// forward or derivative solve fails.
FiniteDifferenceReport finite_difference_check(const StateProblem& prob, const FeFunction& u, const FeFunction& h,
                                               const std::vector<double>& t_list,
                                               double zero_tol = kDefaultZeroTol);

// Fraction of interior nodes with |y_i| <= zero_tol.
double gateaux_zero_fraction(const FeFunction& y, double zero_tol = kDefaultZeroTol);

// Solution operator of the linear equation -lap eta + chi eta = h, i.e.
// (A + D diag(chi)) eta = M h. Throws ConfigError unless 0 <= chi <= 1.
FeFunction apply_g_chi(const FeOperators& ops, const FeFunction& chi, const FeFunction& h);

// ||d(h) + d(-h)||_L2 <= 1e-8 (1 + ||d(h)||_L2) at y = S(u).
bool check_symmetric_derivative(const StateProblem& prob, const FeFunction& u, const FeFunction& h,
                                double zero_tol = kDefaultZeroTol);

}  // namespace nsoc::state
