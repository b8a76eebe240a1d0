#include "nsoc/kkt/kkt_solver.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/nonsmooth.hpp"
#include "nsoc/simd/kernels.hpp"
#include "nsoc/sparse/block.hpp"
#include "nsoc/sparse/direct_solver.hpp"

#include <cmath>
#include <string>

namespace nsoc::kkt {

namespace {

void require_space(const FeOperators& ops, const FeFunction& g, const char* what) {
  if (g.space_ptr() != ops.space) throw DimensionError(std::string(what) + " does not live on the operators' space");
}

void require_point(const ProblemData& data, const KktPoint& pt) {
  require_space(*data.ops, pt.y, "y");
  require_space(*data.ops, pt.p, "p");
  require_space(*data.ops, pt.chi, "chi");
}

}  // namespace

KktPoint KktPoint::zeros(const std::shared_ptr<const fe::FeSpace>& space) {
  return {FeFunction::zeros(space), FeFunction::zeros(space), FeFunction::zeros(space)};
}

void KktConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(tol_residual > 0.0)) throw ConfigError("tol_residual must be positive");
  if (max_iter <= 0) throw ConfigError("max_iter must be positive");
  if (!(tol_p_critical > 0.0)) throw ConfigError("tol_p_critical must be positive");
}

ProblemData::ProblemData(std::shared_ptr<const FeOperators> ops_in, FeFunction f_in, FeFunction y_d_in,
                         KktConfig config_in)
    : ops(std::move(ops_in)), f(std::move(f_in)), y_d(std::move(y_d_in)), config(config_in) {
  if (!ops) throw ConfigError("ProblemData: null operators");
  require_space(*ops, f, "f");
  require_space(*ops, y_d, "y_d");
  config.validate();
}

Vector residual(const ProblemData& data, const KktPoint& pt) {
  require_point(data, pt);
  const FeOperators& ops = *data.ops;
  const auto n = static_cast<std::size_t>(data.size());
  const double alpha = data.config.alpha;
  const double gamma = data.config.gamma;

  Vector r(3 * n);
  std::span<double> r1(r.data(), n), r2(r.data() + n, n), r3(r.data() + 2 * n, n);
  Vector tmp(n), tmp2(n);

  // r1 = A y + D max(0, y) + (1/alpha) M p - M f
  ops.stiffness.spmv(pt.y.coeffs(), r1);
  nonsmooth::max0(pt.y.coeffs(), tmp);
  simd::hadamard(ops.lumped, tmp, tmp);
  simd::axpy(1.0, tmp, r1);
  tmp2 = pt.p.vector();
  simd::axpy(-alpha, data.f.coeffs(), tmp2);
  ops.mass.spmv(tmp2, tmp);
  simd::axpy(1.0 / alpha, tmp, r1);

  // r2 = A p + D (chi .* p) - M (y - y_d)
  ops.stiffness.spmv(pt.p.coeffs(), r2);
  simd::hadamard(pt.chi.coeffs(), pt.p.coeffs(), tmp);
  simd::hadamard(ops.lumped, tmp, tmp);
  simd::axpy(1.0, tmp, r2);
  tmp2 = pt.y.vector();
  simd::axpy(-1.0, data.y_d.coeffs(), tmp2);
  ops.mass.spmv(tmp2, tmp);
  simd::axpy(-1.0, tmp, r2);

  // r3 = D (y - prox(y + gamma chi))
  tmp2 = pt.y.vector();
  simd::axpy(gamma, pt.chi.coeffs(), tmp2);
  nonsmooth::prox(gamma, tmp2, tmp);
  for (std::size_t i = 0; i < n; ++i) r3[i] = ops.lumped[i] * (pt.y.coeffs()[i] - tmp[i]);
  return r;
}

IndexSets index_sets(const KktPoint& pt, const KktConfig& config) {
  IndexSets sets;
  const double gamma = config.gamma;
  for (Index i = 0; i < pt.y.size(); ++i) {
    const double yi = pt.y[i];
    if (yi > 0.0) sets.i_plus.push_back(i);
    if (nonsmooth::prox_active(gamma, yi + gamma * pt.chi[i]))
      sets.i_gamma.push_back(i);
    else if (std::abs(pt.p[i]) <= config.tol_p_critical)
      sets.i_crit.push_back(i);
  }
  return sets;
}

CsrMatrix newton_matrix(const ProblemData& data, const KktPoint& pt, const IndexSets& sets) {
  require_point(data, pt);
  const FeOperators& ops = *data.ops;
  const auto n = static_cast<std::size_t>(data.size());
  const Vector& d = ops.lumped;

  Vector d_plus(n, 0.0), d_chi(n), d_p(n), d_inactive(d), d_active(n, 0.0);
  for (Index i : sets.i_plus) d_plus[i] = d[i];
  simd::hadamard(d, pt.chi.coeffs(), d_chi);
  simd::hadamard(d, pt.p.coeffs(), d_p);
  for (Index i : sets.i_gamma) {
    d_inactive[i] = 0.0;
    d_active[i] = -data.config.gamma * d[i];
  }

  const CsrMatrix state_block = ops.stiffness.plus_diagonal(d_plus);
  const CsrMatrix adjoint_block = ops.stiffness.plus_diagonal(d_chi);
  const CsrMatrix coupling = CsrMatrix::diagonal(d_p);
  const CsrMatrix prox_y = CsrMatrix::diagonal(d_inactive);
  const CsrMatrix prox_chi = CsrMatrix::diagonal(d_active);

  sparse::BlockSpec spec(3, 3);
  spec.set(0, 0, state_block)
      .set(0, 1, ops.mass, 1.0 / data.config.alpha)
      .set(1, 0, ops.mass, -1.0)
      .set(1, 1, adjoint_block)
      .set(1, 2, coupling)
      .set(2, 0, prox_y)
      .set(2, 2, prox_chi);
  return sparse::assemble_block(spec);
}

std::pair<CsrMatrix, Vector> apply_active_set_fix(const CsrMatrix& matrix, Vector rhs, const IndexSets& sets) {
  if (matrix.rows() != static_cast<Index>(rhs.size()) || matrix.rows() % 3 != 0)
    throw DimensionError("apply_active_set_fix: expected a 3n x 3n system");
  if (sets.i_crit.empty()) return {matrix, std::move(rhs)};
  const Index n = matrix.rows() / 3;
  std::vector<Index> rows;
  rows.reserve(sets.i_crit.size());
  for (Index i : sets.i_crit) {
    rows.push_back(2 * n + i);
    rhs[2 * n + i] = 0.0;
  }
  return {matrix.with_unit_rows(rows), std::move(rhs)};
}

std::pair<KktPoint, NewtonReport> solve_kkt(const ProblemData& data, const KktPoint& init) {
  require_point(data, init);
  const KktConfig& cfg = data.config;
  const auto n = static_cast<std::size_t>(data.size());
  KktPoint pt = init;
  NewtonReport report;

  while (true) {
    Vector r = residual(data, pt);
    const double rnorm = simd::norm2(r);
    report.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) {
      report.failure_reason = "residual is not finite";
      break;
    }
    if (rnorm < cfg.tol_residual) {
      report.converged = true;
      break;
    }
    if (report.iterations >= cfg.max_iter) {
      report.failure_reason = "no convergence within " + std::to_string(cfg.max_iter) + " iterations";
      break;
    }

    const IndexSets sets = index_sets(pt, cfg);
    for (double& v : r) v = -v;
    auto [matrix, rhs] = apply_active_set_fix(newton_matrix(data, pt, sets), std::move(r), sets);
    Vector step;
    try {
      step = sparse::solve_linear(matrix, rhs);
    } catch (const SingularMatrixError& e) {
      report.failure_reason = std::string("singular Newton matrix: ") + e.what();
      break;
    }
    simd::axpy(1.0, std::span<const double>(step.data(), n), pt.y.coeffs());
    simd::axpy(1.0, std::span<const double>(step.data() + n, n), pt.p.coeffs());
    simd::axpy(1.0, std::span<const double>(step.data() + 2 * n, n), pt.chi.coeffs());
    ++report.iterations;
  }
  return {std::move(pt), std::move(report)};
}

FeFunction recover_control(const KktPoint& pt, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("recover_control: alpha must be positive");
  FeFunction u = pt.p;
  for (double& v : u.coeffs()) v = -v / alpha;
  return u;
}

}  // namespace nsoc::kkt
