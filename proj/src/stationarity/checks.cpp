#include "nsoc/stationarity/checks.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nsoc::stationarity {

namespace {

constexpr std::size_t kMaxListedNodes = 16;

}  // namespace

ChiAdmissibilityReport check_chi_admissible(const FeFunction& y, const FeFunction& chi, double zero_tol,
                                            double chi_tol) {
  if (!y.same_space(chi)) throw DimensionError("check_chi_admissible: y and chi on different spaces");
  ChiAdmissibilityReport report;
  report.n_nodes = y.size();
  for (Index i = 0; i < y.size(); ++i) {
    double deviation = 0.0;
    if (y[i] > zero_tol)
      deviation = std::abs(chi[i] - 1.0);
    else if (y[i] < -zero_tol)
      deviation = std::abs(chi[i]);
    else {
      ++report.n_zero_band;
      deviation = std::max({0.0, -chi[i], chi[i] - 1.0});
    }
    if (!(deviation <= chi_tol)) {
      ++report.n_violations;
      report.max_deviation = std::max(report.max_deviation, std::isfinite(deviation) ? deviation : HUGE_VAL);
      if (report.violating_nodes.size() < kMaxListedNodes) report.violating_nodes.push_back(i);
    }
  }
  return report;
}

double check_bouligand_residual(const kkt::ProblemData& data, const kkt::KktPoint& pt) {
  return simd::norm2(kkt::residual(data, pt));
}

StrongSignReport check_strong_sign(const FeFunction& y, const FeFunction& p, double zero_tol, double sign_tol) {
  if (!y.same_space(p)) throw DimensionError("check_strong_sign: y and p on different spaces");
  StrongSignReport report;
  for (Index i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > zero_tol) continue;
    ++report.n_zero_band;
    if (p[i] > sign_tol) {
      ++report.n_violations;
      report.max_violation = std::max(report.max_violation, p[i]);
    }
  }
  if (report.n_zero_band > 0)
    report.violation_fraction = static_cast<double>(report.n_violations) / static_cast<double>(report.n_zero_band);
  return report;
}

PrimalStationarityReport check_primal_stationarity(const kkt::ProblemData& data, const kkt::KktPoint& pt,
                                                   const std::vector<FeFunction>& directions, double tol,
                                                   double zero_tol) {
  const fe::FeOperators& ops = *data.ops;
  const state::StateProblem prob(data.ops, data.f);
  const FeFunction u = kkt::recover_control(pt, data.config.alpha);

  fe::Vector misfit(pt.y.vector());
  simd::axpy(-1.0, data.y_d.coeffs(), misfit);
  const fe::Vector m_misfit = ops.mass.spmv(misfit);
  const fe::Vector m_u = ops.mass_times(u);

  PrimalStationarityReport report;
  report.n_directions = static_cast<Index>(directions.size());
  report.min_value = HUGE_VAL;
  for (const FeFunction& h : directions) {
    for (double sign : {1.0, -1.0}) {
      FeFunction dir = h;
      for (double& v : dir.coeffs()) v *= sign;
      auto [d, rep] = state::directional_derivative(prob, pt.y, dir, zero_tol);
      if (!rep.converged) throw SolverFailure("check_primal_stationarity: derivative solve failed");
      const double value = simd::dot(m_misfit, d.coeffs()) + data.config.alpha * simd::dot(m_u, dir.coeffs());
      report.values.push_back(value);
      report.min_value = std::min(report.min_value, value);
      if (value < -tol) ++report.n_negative;
    }
  }
  if (directions.empty()) report.min_value = 0.0;
  return report;
}

std::vector<FeFunction> sample_directions(const std::shared_ptr<const fe::FeSpace>& space, std::uint64_t seed,
                                          int n_random) {
  std::vector<FeFunction> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < n_random; ++k) {
    FeFunction h = FeFunction::zeros(space);
    for (double& v : h.coeffs()) v = unit(rng);
    out.push_back(std::move(h));
  }

  FeFunction constant = FeFunction::zeros(space);
  std::fill(constant.coeffs().begin(), constant.coeffs().end(), 1.0);
  out.push_back(std::move(constant));

  const int m = space->mesh().subdivisions();
  for (auto [fx, fy] : {std::pair{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}}) {
    const int i = std::clamp(static_cast<int>(std::lround(fx * m)), 1, m - 1);
    const int j = std::clamp(static_cast<int>(std::lround(fy * m)), 1, m - 1);
    FeFunction bump = FeFunction::zeros(space);
    bump[space->dof_of_vertex(space->mesh().vertex_index(i, j))] = 1.0;
    out.push_back(std::move(bump));
  }
  return out;
}

double eval_reduced_objective(const kkt::ProblemData& data, const FeFunction& u) {
  const state::StateProblem prob(data.ops, data.f);
  auto [y, rep] = state::solve_state(prob, u);
  if (!rep.converged) throw SolverFailure("eval_reduced_objective: state solve failed");
  fe::Vector misfit(y.vector());
  simd::axpy(-1.0, data.y_d.coeffs(), misfit);
  const double tracking = simd::dot(misfit, data.ops->mass.spmv(misfit));
  const double control = simd::dot(u.coeffs(), data.ops->mass_times(u));
  return 0.5 * tracking + 0.5 * data.config.alpha * control;
}

}  // namespace nsoc::stationarity
