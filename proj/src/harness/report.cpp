#include "nsoc/harness/report.hpp"

#include <fstream>
#include <stdexcept>

namespace nsoc::harness {

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const NewtonReport& r) {
  nlohmann::json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["residual_history"] = r.residual_history;
  j["failure_reason"] = r.failure_reason ? nlohmann::json(*r.failure_reason) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const ExperimentRow& r) {
  return {{"h", r.h},
          {"alpha", r.alpha},
          {"gamma", r.gamma},
          {"err_y_rel", opt(r.err_y_rel)},
          {"err_p", opt(r.err_p)},
          {"err_chi_linf", opt(r.err_chi_linf)},
          {"newton_iters", r.newton_iters},
          {"status", r.status()}};
}

nlohmann::json to_json(const regpath::PathReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"eps", s.eps},
                     {"newton", to_json(s.report)},
                     {"cold_restart", s.cold_restart},
                     {"limit_residual", s.limit_residual}});
  return {{"completed", r.completed},
          {"failure_reason", r.failure_reason},
          {"decreasing_fraction", r.decreasing_fraction()},
          {"steps", steps}};
}

nlohmann::json to_json(const stationarity::ChiAdmissibilityReport& r) {
  return {{"passed", r.passed()},
          {"n_nodes", r.n_nodes},
          {"n_zero_band", r.n_zero_band},
          {"n_violations", r.n_violations},
          {"max_deviation", r.max_deviation},
          {"violating_nodes", r.violating_nodes}};
}

nlohmann::json to_json(const stationarity::StrongSignReport& r) {
  return {{"passed", r.passed()},
          {"n_zero_band", r.n_zero_band},
          {"n_violations", r.n_violations},
          {"max_violation", r.max_violation},
          {"violation_fraction", r.violation_fraction}};
}

nlohmann::json to_json(const stationarity::PrimalStationarityReport& r) {
  return {{"passed", r.passed()},
          {"n_directions", r.n_directions},
          {"n_negative", r.n_negative},
          {"min_value", r.min_value},
          {"values", r.values}};
}

nlohmann::json to_json(const state::FiniteDifferenceReport& r) {
  return {{"passed", r.passed()},
          {"steps", r.steps},
          {"errors", r.errors},
          {"derivative_norm", r.derivative_norm},
          {"monotone", r.monotone},
          {"small_at_min_step", r.small_at_min_step}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace nsoc::harness
