#include "nsoc/harness/sweep.hpp"

#include "nsoc/errors.hpp"
#include "nsoc/fe/functions.hpp"
#include "nsoc/loglog_fit.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace nsoc::harness {

namespace {

FeFunction nodal_field(const std::shared_ptr<const fe::FeSpace>& space,
                       const std::variant<double, std::vector<double>>& v) {
  if (const auto* c = std::get_if<double>(&v))
    return FeFunction(space, Vector(static_cast<std::size_t>(space->size()), *c));
  const auto& values = std::get<std::vector<double>>(v);
  if (static_cast<Index>(values.size()) != space->size())
    throw ConfigError("custom nodal data has " + std::to_string(values.size()) + " values, mesh has " +
                      std::to_string(space->size()) + " interior nodes");
  return FeFunction(space, values);
}

double diff_norm(const fe::FeOperators& ops, const FeFunction& a, const FeFunction& b) {
  Vector d(a.vector());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b.vector()[i];
  return ops.l2_norm(d);
}

std::string cell(const std::optional<double>& v) {
  if (!v) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", *v);
  return buf;
}

std::string cell(double v) { return cell(std::optional<double>(v)); }

}  // namespace

CaseErrors measure_errors(const ManufacturedExample& ex, const kkt::KktPoint& pt, ErrorNorm norm) {
  const auto& ops = *ex.data.ops;
  const auto zero = FeFunction::zeros(ex.y_star.space_ptr());
  double ey = 0.0, ny = 0.0, ep = 0.0, np = 0.0;
  if (norm == ErrorNorm::interpolant) {
    ey = diff_norm(ops, pt.y, ex.y_star);
    ny = ops.l2_norm(ex.y_star.vector());
    ep = diff_norm(ops, pt.p, ex.p_star);
    np = ops.l2_norm(ex.p_star.vector());
  } else {
    ey = fe::l2_error(pt.y, ex.y_exact);
    ny = fe::l2_error(zero, ex.y_exact);
    ep = fe::l2_error(pt.p, ex.p_exact);
    np = fe::l2_error(zero, ex.p_exact);
  }
  CaseErrors e;
  e.y_rel = ey / ny;
  if (ex.id == 1) {
    e.p = ep;
    e.chi_linf = fe::linf_nodal_error(pt.chi, ex.chi_star);
  } else {
    e.p = ep / np;
  }
  return e;
}

CaseSetup build_case(const RunConfig& cfg, std::shared_ptr<const fe::FeOperators> ops, double alpha, double gamma) {
  kkt::KktConfig kc;
  kc.alpha = alpha;
  kc.gamma = gamma;
  kc.tol_residual = cfg.tolerances.tol_residual;
  kc.max_iter = cfg.tolerances.max_iter;
  kc.tol_p_critical = cfg.tolerances.tol_p_critical;
  if (cfg.example == 0) {
    if (!cfg.custom) throw ConfigError("custom example needs custom data");
    auto f = nodal_field(ops->space, cfg.custom->f);
    auto y_d = nodal_field(ops->space, cfg.custom->y_d);
    return CaseSetup{kkt::ProblemData(ops, std::move(f), std::move(y_d), kc), std::nullopt};
  }
  auto ex = build_example(cfg.example, ops, kc);
  auto data = ex.data;
  return CaseSetup{std::move(data), std::move(ex)};
}

CaseResult run_case(const RunConfig& cfg, std::shared_ptr<const fe::FeOperators> ops, double alpha, double gamma) {
  auto setup = build_case(cfg, ops, alpha, gamma);
  auto [pt, report] = kkt::solve_kkt(setup.data, kkt::KktPoint::zeros(ops->space));
  ExperimentRow row;
  row.h = 1.0 / ops->space->mesh().subdivisions();
  row.alpha = alpha;
  row.gamma = gamma;
  row.newton_iters = report.iterations;
  row.converged = report.converged;
  row.failure_reason = report.failure_reason;
  if (report.converged && setup.example) {
    const auto e = measure_errors(*setup.example, pt, cfg.error_norm);
    row.err_y_rel = e.y_rel;
    row.err_p = e.p;
    row.err_chi_linf = e.chi_linf;
  }
  return CaseResult{std::move(setup), std::move(pt), std::move(report), std::move(row)};
}

std::vector<ExperimentRow> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ExperimentRow> rows;
  for (int m : cfg.m_list) {
    const auto ops = make_operators(m);
    for (double alpha : cfg.alpha_list)
      for (double gamma : cfg.gamma_list) rows.push_back(run_case(cfg, ops, alpha, gamma).row);
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "h,alpha,gamma,err_y_rel,err_p,err_chi_linf,newton_iters,status\n";
  for (const auto& r : rows) {
    out << cell(r.h) << ',' << cell(r.alpha) << ',' << cell(r.gamma) << ',' << cell(r.err_y_rel) << ','
        << cell(r.err_p) << ',' << cell(r.err_chi_linf) << ',' << r.newton_iters << ',' << r.status() << '\n';
  }
}

void write_csv(const std::filesystem::path& path, std::span<const ExperimentRow> rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, rows);
}

double estimate_order(std::span<const double> h, std::span<const double> err) { return loglog_slope(h, err); }

}  // namespace nsoc::harness
