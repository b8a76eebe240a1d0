#include "nsoc/state/state_solver.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/nonsmooth.hpp"
#include "nsoc/simd/kernels.hpp"
#include "nsoc/sparse/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsoc::state {

namespace {

void require_space(const FeOperators& ops, const FeFunction& g, const char* what) {
  if (g.space_ptr() != ops.space) throw DimensionError(std::string(what) + " does not live on the operators' space");
}

// Newton for  A y + D phi(y) = rhs  where phi acts nodally. `phi` fills
// phi(y) and `slope` fills an element of its generalized derivative.
template <class Phi, class Slope>
NewtonReport diagonal_newton(const FeOperators& ops, Vector& y, const Vector& rhs, Phi phi, Slope slope,
                             const NewtonOptions& opts, bool damped) {
  const std::size_t n = y.size();
  const double tol = opts.rel_tol * std::max(1.0, simd::norm2(rhs));
  Vector work(n), residual(n), jac_diag(n);

  auto eval_residual = [&](const Vector& z, Vector& r) {
    ops.stiffness.spmv(z, r);
    phi(z, work);
    simd::hadamard(ops.lumped, work, work);
    simd::axpy(1.0, work, r);
    simd::axpy(-1.0, rhs, r);
    return simd::norm2(r);
  };

  NewtonReport report;
  double rnorm = eval_residual(y, residual);
  report.residual_history.push_back(rnorm);
  while (true) {
    if (rnorm <= tol) {
      report.converged = true;
      return report;
    }
    if (report.iterations >= opts.max_iter) {
      report.failure_reason = "no convergence within " + std::to_string(opts.max_iter) + " iterations";
      return report;
    }
    slope(y, jac_diag);
    simd::hadamard(ops.lumped, jac_diag, jac_diag);
    Vector step;
    try {
      step = sparse::solve_linear(ops.stiffness.plus_diagonal(jac_diag), residual);
    } catch (const SingularMatrixError& e) {
      report.failure_reason = e.what();
      return report;
    }

    double t = 1.0;
    Vector trial(n), trial_residual(n);
    double trial_norm = 0.0;
    for (int halving = 0;; ++halving) {
      trial = y;
      simd::axpy(-t, step, trial);
      trial_norm = eval_residual(trial, trial_residual);
      if (!damped || trial_norm < rnorm || halving == 30) break;
      t *= 0.5;
    }
    y.swap(trial);
    residual.swap(trial_residual);
    rnorm = trial_norm;
    ++report.iterations;
    report.residual_history.push_back(rnorm);
  }
}

Vector state_rhs(const StateProblem& prob, const FeFunction& u) {
  require_space(*prob.ops, u, "control");
  Vector uf(u.vector());
  simd::axpy(1.0, prob.f.coeffs(), uf);
  return prob.ops->mass.spmv(uf);
}

}  // namespace

StateProblem::StateProblem(std::shared_ptr<const FeOperators> ops_in, FeFunction f_in)
    : ops(std::move(ops_in)), f(std::move(f_in)) {
  if (!ops) throw ConfigError("StateProblem: null operators");
  require_space(*ops, f, "inhomogeneity f");
}

StateProblem::StateProblem(std::shared_ptr<const FeOperators> ops_in)
    : StateProblem(ops_in, FeFunction::zeros(ops_in->space)) {}

std::pair<FeFunction, NewtonReport> solve_state(const StateProblem& prob, const FeFunction& u,
                                                const NewtonOptions& opts) {
  const Vector rhs = state_rhs(prob, u);
  Vector y(rhs.size(), 0.0);
  auto phi = [](const Vector& z, Vector& out) { nonsmooth::max0(z, out); };
  auto slope = [](const Vector& z, Vector& out) {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] > 0.0 ? 1.0 : 0.0;
  };
  NewtonReport report = diagonal_newton(*prob.ops, y, rhs, phi, slope, opts, false);
  return {FeFunction(prob.ops->space, std::move(y)), std::move(report)};
}

std::pair<FeFunction, NewtonReport> solve_state_regularized(const StateProblem& prob, const FeFunction& u,
                                                            double eps, const NewtonOptions& opts) {
  const nonsmooth::SmoothedMax smax(eps);
  const Vector rhs = state_rhs(prob, u);
  Vector y(rhs.size(), 0.0);
  auto phi = [&](const Vector& z, Vector& out) {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = smax.value(z[i]);
  };
  auto slope = [&](const Vector& z, Vector& out) {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = smax.prime(z[i]);
  };
  NewtonReport report = diagonal_newton(*prob.ops, y, rhs, phi, slope, opts, true);
  return {FeFunction(prob.ops->space, std::move(y)), std::move(report)};
}

std::pair<FeFunction, NewtonReport> directional_derivative(const StateProblem& prob, const FeFunction& y,
                                                           const FeFunction& h, double zero_tol,
                                                           const NewtonOptions& opts) {
  require_space(*prob.ops, y, "state");
  require_space(*prob.ops, h, "direction");
  if (!(zero_tol >= 0.0)) throw ConfigError("directional_derivative: zero_tol must be non-negative");

  const std::size_t n = static_cast<std::size_t>(y.size());
  Vector on_zero(n), on_pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    on_zero[i] = std::abs(y[static_cast<Index>(i)]) <= zero_tol ? 1.0 : 0.0;
    on_pos[i] = y[static_cast<Index>(i)] > zero_tol ? 1.0 : 0.0;
  }
  const Vector rhs = prob.ops->mass_times(h);
  Vector d(n, 0.0);
  auto phi = [&](const Vector& z, Vector& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = on_zero[i] * nonsmooth::max0(z[i]) + on_pos[i] * z[i];
  };
  auto slope = [&](const Vector& z, Vector& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = on_pos[i] + (z[i] > 0.0 ? on_zero[i] : 0.0);
  };
  NewtonReport report = diagonal_newton(*prob.ops, d, rhs, phi, slope, opts, false);
  return {FeFunction(prob.ops->space, std::move(d)), std::move(report)};
}

FiniteDifferenceReport finite_difference_check(const StateProblem& prob, const FeFunction& u, const FeFunction& h,
                                               const std::vector<double>& t_list, double zero_tol) {
  if (t_list.empty()) throw ConfigError("finite_difference_check: empty step list");
  for (std::size_t k = 0; k < t_list.size(); ++k)
    if (!(t_list[k] > 0.0) || (k > 0 && !(t_list[k] < t_list[k - 1])))
      throw ConfigError("finite_difference_check: steps must be positive and strictly decreasing");

  const FeOperators& ops = *prob.ops;
  auto [y, rep] = solve_state(prob, u);
  if (!rep.converged) throw SolverFailure("finite_difference_check: base state solve failed");
  auto [d, drep] = directional_derivative(prob, y, h, zero_tol);
  if (!drep.converged) throw SolverFailure("finite_difference_check: derivative solve failed");

  FiniteDifferenceReport report;
  report.steps = t_list;
  report.derivative_norm = ops.l2_norm(d);
  for (double t : t_list) {
    FeFunction ut = u;
    simd::axpy(t, h.coeffs(), ut.coeffs());
    auto [yt, trep] = solve_state(prob, ut);
    if (!trep.converged) throw SolverFailure("finite_difference_check: perturbed state solve failed");
    Vector q(yt.vector());
    simd::axpy(-1.0, y.coeffs(), q);
    for (double& v : q) v /= t;
    simd::axpy(-1.0, d.coeffs(), q);
    report.errors.push_back(ops.l2_norm(q));
  }

  const double floor = 1e-8 * (1.0 + report.derivative_norm);
  report.monotone = true;
  for (std::size_t k = 1; k < report.errors.size(); ++k)
    if (report.errors[k] > 1.1 * report.errors[k - 1] + floor) report.monotone = false;
  report.small_at_min_step = report.errors.back() <= 1e-4 * (1.0 + report.derivative_norm);
  return report;
}

double gateaux_zero_fraction(const FeFunction& y, double zero_tol) {
  if (y.size() == 0) return 0.0;
  const auto c = y.coeffs();
  const auto zeros = std::count_if(c.begin(), c.end(), [&](double v) { return std::abs(v) <= zero_tol; });
  return static_cast<double>(zeros) / static_cast<double>(c.size());
}

FeFunction apply_g_chi(const FeOperators& ops, const FeFunction& chi, const FeFunction& h) {
  require_space(ops, chi, "chi");
  require_space(ops, h, "right-hand side");
  for (Index i = 0; i < chi.size(); ++i)
    if (!(chi[i] >= 0.0 && chi[i] <= 1.0))
      throw ConfigError("apply_g_chi: chi[" + std::to_string(i) + "] = " + std::to_string(chi[i]) +
                        " outside [0, 1]");
  Vector diag(static_cast<std::size_t>(chi.size()));
  simd::hadamard(ops.lumped, chi.coeffs(), diag);
  Vector eta = sparse::solve_linear(ops.stiffness.plus_diagonal(diag), ops.mass_times(h));
  return FeFunction(ops.space, std::move(eta));
}

bool check_symmetric_derivative(const StateProblem& prob, const FeFunction& u, const FeFunction& h,
                                double zero_tol) {
  auto [y, rep] = solve_state(prob, u);
  if (!rep.converged) throw SolverFailure("check_symmetric_derivative: state solve failed");
  FeFunction minus_h = h;
  for (double& v : minus_h.coeffs()) v = -v;
  auto [dp, rp] = directional_derivative(prob, y, h, zero_tol);
  auto [dm, rm] = directional_derivative(prob, y, minus_h, zero_tol);
  if (!rp.converged || !rm.converged) throw SolverFailure("check_symmetric_derivative: derivative solve failed");
  Vector sum(dp.vector());
  simd::axpy(1.0, dm.coeffs(), sum);
  const auto& ops = *prob.ops;
  return ops.l2_norm(sum) <= 1e-8 * (1.0 + ops.l2_norm(dp));
}

}  // namespace nsoc::state
