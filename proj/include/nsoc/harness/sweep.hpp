#pragma once

#include "nsoc/harness/config.hpp"
#include "nsoc/harness/examples.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nsoc::harness {

// One line of a convergence table. Error cells are empty when the solver
// did not converge or when the example has no reference value for them.
struct ExperimentRow {
  double h = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::optional<double> err_y_rel;
  std::optional<double> err_p;  // absolute for example 1, relative for example 2
  std::optional<double> err_chi_linf;
  int newton_iters = 0;
  bool converged = false;
  std::optional<std::string> failure_reason;

  std::string status() const { return converged ? "ok" : "no_conv"; }
};

struct CaseErrors {
  double y_rel = 0.0;
  double p = 0.0;
  std::optional<double> chi_linf;
};

// Error of a discrete solution against the manufactured one under the chosen
// norm; conventions per example as in ExperimentRow.
CaseErrors measure_errors(const ManufacturedExample& ex, const kkt::KktPoint& pt, ErrorNorm norm);

// Problem data for one (alpha, gamma) cell of cfg on the given operators.
// For examples 1 and 2 the manufactured solution is returned as well.
struct CaseSetup {
  kkt::ProblemData data;
  std::optional<ManufacturedExample> example;
};
CaseSetup build_case(const RunConfig& cfg, std::shared_ptr<const fe::FeOperators> ops, double alpha, double gamma);

struct CaseResult {
  CaseSetup setup;
  kkt::KktPoint point;
  NewtonReport report;
  ExperimentRow row;
};

// Solves one cell with the semi-smooth Newton method from the zero point.
CaseResult run_case(const RunConfig& cfg, std::shared_ptr<const fe::FeOperators> ops, double alpha, double gamma);

// One row per (m, alpha, gamma) in config order; failures become no_conv
// rows and the sweep goes on.
std::vector<ExperimentRow> run_sweep(const RunConfig& cfg);

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows);
void write_csv(const std::filesystem::path& path, std::span<const ExperimentRow> rows);

// Least-squares slope of log(err) against log(h). Throws ConfigError for
// fewer than two points or non-positive entries.
double estimate_order(std::span<const double> h, std::span<const double> err);

}  // namespace nsoc::harness
