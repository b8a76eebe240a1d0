#include "nsoc/regpath/regularization_path.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/loglog_fit.hpp"
#include "nsoc/nonsmooth.hpp"
#include "nsoc/simd/kernels.hpp"
#include "nsoc/sparse/block.hpp"
#include "nsoc/sparse/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nsoc::regpath {

void RegPathConfig::validate() const {
  if (eps_schedule.empty()) throw ConfigError("regularization path: empty eps schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0)) throw ConfigError("regularization path: eps must be positive");
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))
      throw ConfigError("regularization path: eps schedule must be strictly decreasing");
  }
  if (!(tol_residual > 0.0) || max_iter <= 0) throw ConfigError("regularization path: invalid tolerances");
}

Vector regularized_residual(const kkt::ProblemData& data, double eps, const StateAdjoint& point) {
  const nonsmooth::SmoothedMax smax(eps);
  const fe::FeOperators& ops = *data.ops;
  const auto n = static_cast<std::size_t>(data.size());
  const double alpha = data.config.alpha;

  Vector r(2 * n), tmp(n), tmp2(n);
  std::span<double> r1(r.data(), n), r2(r.data() + n, n);

  ops.stiffness.spmv(point.y.coeffs(), r1);
  for (std::size_t i = 0; i < n; ++i) r1[i] += ops.lumped[i] * smax.value(point.y.coeffs()[i]);
  tmp2 = point.p.vector();
  simd::axpy(-alpha, data.f.coeffs(), tmp2);
  ops.mass.spmv(tmp2, tmp);
  simd::axpy(1.0 / alpha, tmp, r1);

  ops.stiffness.spmv(point.p.coeffs(), r2);
  for (std::size_t i = 0; i < n; ++i) r2[i] += ops.lumped[i] * smax.prime(point.y.coeffs()[i]) * point.p.coeffs()[i];
  tmp2 = point.y.vector();
  simd::axpy(-1.0, data.y_d.coeffs(), tmp2);
  ops.mass.spmv(tmp2, tmp);
  simd::axpy(-1.0, tmp, r2);
  return r;
}

std::pair<StateAdjoint, NewtonReport> solve_regularized_kkt(const kkt::ProblemData& data, double eps,
                                                            const StateAdjoint& init, const RegPathConfig& cfg) {
  const nonsmooth::SmoothedMax smax(eps);
  const fe::FeOperators& ops = *data.ops;
  if (init.y.space_ptr() != ops.space || init.p.space_ptr() != ops.space)
    throw DimensionError("solve_regularized_kkt: initial point on a different space");
  const auto n = static_cast<std::size_t>(data.size());

  StateAdjoint point = init;
  NewtonReport report;
  Vector slope(n), curvature(n);
  while (true) {
    Vector r = regularized_residual(data, eps, point);
    const double rnorm = simd::norm2(r);
    report.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) {
      report.failure_reason = "residual is not finite";
      break;
    }
    if (rnorm <= cfg.tol_residual) {
      report.converged = true;
      break;
    }
    if (report.iterations >= cfg.max_iter) {
      report.failure_reason = "no convergence within " + std::to_string(cfg.max_iter) + " iterations";
      break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double yi = point.y.coeffs()[i];
      slope[i] = ops.lumped[i] * smax.prime(yi);
      curvature[i] = ops.lumped[i] * smax.second(yi) * point.p.coeffs()[i];
    }
    const sparse::CsrMatrix diag_block = ops.stiffness.plus_diagonal(slope);
    const sparse::CsrMatrix cross = ops.mass.scaled(-1.0).plus_diagonal(curvature);
    sparse::BlockSpec spec(2, 2);
    spec.set(0, 0, diag_block).set(0, 1, ops.mass, 1.0 / data.config.alpha).set(1, 0, cross).set(1, 1, diag_block);

    Vector step;
    try {
      step = sparse::solve_linear(sparse::assemble_block(spec), r);
    } catch (const SingularMatrixError& e) {
      report.failure_reason = std::string("singular Newton matrix: ") + e.what();
      break;
    }
    simd::axpy(-1.0, std::span<const double>(step.data(), n), point.y.coeffs());
    simd::axpy(-1.0, std::span<const double>(step.data() + n, n), point.p.coeffs());
    ++report.iterations;
  }
  return {std::move(point), std::move(report)};
}

double PathReport::decreasing_fraction() const {
  if (steps.size() < 2) return 1.0;
  std::size_t ok = 0;
  for (std::size_t k = 1; k < steps.size(); ++k)
    if (steps[k].limit_residual <= steps[k - 1].limit_residual) ++ok;
  return static_cast<double>(ok) / static_cast<double>(steps.size() - 1);
}

std::pair<kkt::KktPoint, PathReport> run_path(const kkt::ProblemData& data, const RegPathConfig& cfg) {
  cfg.validate();
  const auto& space = data.ops->space;
  const StateAdjoint zero{fe::FeFunction::zeros(space), fe::FeFunction::zeros(space)};
  StateAdjoint current = zero;
  double last_eps = 0.0;
  bool have_point = false;
  PathReport report;

  for (double eps : cfg.eps_schedule) {
    PathStep step;
    step.eps = eps;
    auto [next, rep] = solve_regularized_kkt(data, eps, cfg.warm_start ? current : zero, cfg);
    if (!rep.converged && cfg.warm_start) {
      step.cold_restart = true;
      std::tie(next, rep) = solve_regularized_kkt(data, eps, zero, cfg);
    }
    step.report = rep;
    if (!rep.converged) {
      report.failure_reason = "eps = " + std::to_string(eps) + ": " + rep.failure_reason.value_or("failed");
      report.steps.push_back(std::move(step));
      break;
    }
    current = std::move(next);
    last_eps = eps;
    have_point = true;

    const nonsmooth::SmoothedMax smax(eps);
    fe::FeFunction chi = fe::FeFunction::zeros(space);
    for (Index i = 0; i < chi.size(); ++i) chi[i] = smax.prime(current.y[i]);
    step.limit_residual = simd::norm2(kkt::residual(data, {current.y, current.p, chi}));
    report.steps.push_back(std::move(step));
  }
  report.completed = report.failure_reason.empty();

  fe::FeFunction chi = fe::FeFunction::zeros(space);
  if (have_point) {
    const nonsmooth::SmoothedMax smax(last_eps);
    for (Index i = 0; i < chi.size(); ++i) chi[i] = smax.prime(current.y[i]);
  }
  return {kkt::KktPoint{std::move(current.y), std::move(current.p), std::move(chi)}, std::move(report)};
}

RegularizationRateReport verify_regularization_rate(const state::StateProblem& prob, const FeFunction& u,
                                  const std::vector<double>& eps_list) {
  if (eps_list.size() < 3) throw ConfigError("verify_regularization_rate: need at least three eps values");
  const auto [lo, hi] = std::minmax_element(eps_list.begin(), eps_list.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12))
    throw ConfigError("verify_regularization_rate: eps values must be positive and span two decades");

  auto [y, rep] = state::solve_state(prob, u);
  if (!rep.converged) throw SolverFailure("verify_regularization_rate: state solve failed");

  RegularizationRateReport report;
  report.eps = eps_list;
  for (double eps : eps_list) {
    auto [y_eps, rep_eps] = state::solve_state_regularized(prob, u, eps);
    if (!rep_eps.converged) throw SolverFailure("verify_regularization_rate: regularized solve failed at eps " + std::to_string(eps));
    Vector diff(y_eps.vector());
    simd::axpy(-1.0, y.coeffs(), diff);
    report.gaps.push_back(prob.ops->l2_norm(diff));
  }
  report.degenerate = std::any_of(report.gaps.begin(), report.gaps.end(), [](double g) { return g == 0.0; });
  if (!report.degenerate) report.slope = loglog_slope(report.eps, report.gaps);
  return report;
}

}  // namespace nsoc::regpath
