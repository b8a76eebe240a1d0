// Command-line driver: solves the manufactured examples, runs parameter
// sweeps and the stationarity checks, and writes CSV/JSON/VTK output.
//
// Exit codes: 0 success, 1 solver or check failure, 2 configuration error.

#include "nsoc/errors.hpp"
#include "nsoc/fe/vtk.hpp"
#include "nsoc/harness/config.hpp"
#include "nsoc/harness/report.hpp"
#include "nsoc/harness/selftest.hpp"
#include "nsoc/harness/sweep.hpp"
#include "nsoc/regpath/regularization_path.hpp"
#include "nsoc/simd/kernels.hpp"
#include "nsoc/stationarity/checks.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace fs = std::filesystem;
using namespace nsoc;
using harness::RunConfig;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

std::string tag(const char* prefix, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%g", prefix, v);
  return buf;
}

std::string case_name(const char* mode, int m, double alpha, double gamma) {
  return std::string(mode) + "_m" + std::to_string(m) + "_" + tag("a", alpha) + "_" + tag("g", gamma);
}

void write_fields(const fs::path& path, const kkt::KktPoint& pt, double alpha) {
  const auto u = kkt::recover_control(pt, alpha);
  fe::export_vtk({{"y", &pt.y}, {"p", &pt.p}, {"chi", &pt.chi}, {"u", &u}}, path);
}

int run_state(const RunConfig& cfg) {
  bool ok = true;
  for (int m : cfg.m_list) {
    const auto ops = harness::make_operators(m);
    const auto setup = harness::build_case(cfg, ops, cfg.alpha_list.front(), cfg.gamma_list.front());
    // Examples: the exact control, so the state approximates y*. Custom: u = 0.
    const auto u = setup.example ? setup.example->u_star : fe::FeFunction::zeros(ops->space);
    const auto [y, report] = state::solve_state(state::StateProblem(ops, setup.data.f), u);
    nlohmann::json j{{"m", m}, {"newton", harness::to_json(report)}};
    if (setup.example) {
      fe::Vector d(y.vector());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= setup.example->y_star.vector()[i];
      j["err_y_rel"] = ops->l2_norm(d) / ops->l2_norm(setup.example->y_star.vector());
    }
    const auto base = cfg.output_dir / ("state_m" + std::to_string(m));
    harness::write_json(base.string() + ".json", j);
    fe::export_vtk({{"y", &y}, {"u", &u}}, base.string() + ".vtk");
    std::cout << "state m=" << m << ": " << (report.converged ? "converged" : "failed") << " in "
              << report.iterations << " iterations\n";
    ok = ok && report.converged;
  }
  return ok ? kOk : kFailure;
}

int run_kkt(const RunConfig& cfg) {
  bool ok = true;
  for (int m : cfg.m_list) {
    const auto ops = harness::make_operators(m);
    for (double alpha : cfg.alpha_list)
      for (double gamma : cfg.gamma_list) {
        const auto res = harness::run_case(cfg, ops, alpha, gamma);
        const auto base = cfg.output_dir / case_name("kkt", m, alpha, gamma);
        harness::write_json(base.string() + ".json",
                            {{"row", harness::to_json(res.row)}, {"newton", harness::to_json(res.report)}});
        write_fields(base.string() + ".vtk", res.point, alpha);
        std::cout << base.filename().string() << ": " << res.row.status() << " after " << res.row.newton_iters
                  << " iterations\n";
        ok = ok && res.report.converged;
      }
  }
  return ok ? kOk : kFailure;
}

int run_regpath(const RunConfig& cfg) {
  regpath::RegPathConfig rc;
  rc.eps_schedule = cfg.eps_schedule;
  rc.tol_residual = cfg.tolerances.tol_residual;
  rc.validate();
  bool ok = true;
  for (int m : cfg.m_list) {
    const auto ops = harness::make_operators(m);
    for (double alpha : cfg.alpha_list) {
      const auto setup = harness::build_case(cfg, ops, alpha, cfg.gamma_list.front());
      const auto [pt, report] = regpath::run_path(setup.data, rc);
      const auto base = cfg.output_dir / ("regpath_m" + std::to_string(m) + "_" + tag("a", alpha));
      harness::write_json(base.string() + ".json", harness::to_json(report));
      write_fields(base.string() + ".vtk", pt, alpha);
      std::cout << base.filename().string() << ": " << (report.completed ? "completed" : report.failure_reason)
                << '\n';
      ok = ok && report.completed;
    }
  }
  return ok ? kOk : kFailure;
}

int run_check(const RunConfig& cfg) {
  bool ok = true;
  for (int m : cfg.m_list) {
    const auto ops = harness::make_operators(m);
    for (double alpha : cfg.alpha_list)
      for (double gamma : cfg.gamma_list) {
        const auto res = harness::run_case(cfg, ops, alpha, gamma);
        const auto name = case_name("check", m, alpha, gamma);
        nlohmann::json j{{"newton", harness::to_json(res.report)}};
        bool passed = res.report.converged;
        if (passed) {
          const auto& data = res.setup.data;
          const double zt = cfg.tolerances.zero_tol;
          const auto chi = stationarity::check_chi_admissible(res.point.y, res.point.chi, zt);
          const double residual = stationarity::check_bouligand_residual(data, res.point);
          const auto sign = stationarity::check_strong_sign(res.point.y, res.point.p, zt);
          const auto primal = stationarity::check_primal_stationarity(
              data, res.point, stationarity::sample_directions(ops->space), 1e-8, zt);
          j["chi_admissible"] = harness::to_json(chi);
          j["limit_residual"] = residual;
          j["strong_sign"] = harness::to_json(sign);
          j["primal_stationarity"] = harness::to_json(primal);
          passed = chi.passed() && residual <= 1e-10 && sign.passed() && primal.passed();
        }
        j["passed"] = passed;
        harness::write_json(cfg.output_dir / (name + ".json"), j);
        std::cout << name << ": " << (passed ? "pass" : "fail") << '\n';
        ok = ok && passed;
      }
  }
  return ok ? kOk : kFailure;
}

int run_sweep_mode(const RunConfig& cfg) {
  const auto rows = harness::run_sweep(cfg);
  const std::string stem = cfg.example == 0 ? "sweep" : "table" + std::to_string(cfg.example);
  harness::write_csv(cfg.output_dir / (stem + ".csv"), rows);

  nlohmann::json j{{"config", harness::to_json(cfg)}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) j["rows"].push_back(harness::to_json(r));
  // Observed order over the converged rows of each (alpha, gamma) pair.
  nlohmann::json orders = nlohmann::json::array();
  for (double alpha : cfg.alpha_list)
    for (double gamma : cfg.gamma_list) {
      std::vector<double> h, ey;
      for (const auto& r : rows)
        if (r.alpha == alpha && r.gamma == gamma && r.err_y_rel && *r.err_y_rel > 0.0) {
          h.push_back(r.h);
          ey.push_back(*r.err_y_rel);
        }
      if (h.size() >= 2 && h.front() != h.back())
        orders.push_back({{"alpha", alpha}, {"gamma", gamma}, {"order_y", harness::estimate_order(h, ey)}});
    }
  j["orders"] = orders;
  harness::write_json(cfg.output_dir / (stem + ".json"), j);

  harness::write_csv(std::cout, rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-smooth Newton solver for a non-smooth optimal control problem"};
  std::string mode_arg, config_path, example_arg, out_dir;
  std::vector<int> m_list;
  std::vector<double> alpha_list, gamma_list;
  app.add_option("mode,--mode", mode_arg, "state | kkt | regpath | check | sweep | selftest");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--example", example_arg, "1, 2 or custom");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--m", m_list, "mesh subdivisions (repeatable)")->take_all();
  app.add_option("--alpha", alpha_list, "Tikhonov weights (repeatable)")->take_all();
  app.add_option("--gamma", gamma_list, "prox steps (repeatable)")->take_all();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  RunConfig cfg;
  try {
    int example = 1;
    if (!example_arg.empty()) {
      if (example_arg == "custom")
        example = 0;
      else if (example_arg == "1" || example_arg == "2")
        example = std::stoi(example_arg);
      else
        throw ConfigError("--example must be 1, 2 or custom");
    }
    if (!config_path.empty()) {
      cfg = harness::load_config(config_path);
      if (!example_arg.empty()) cfg.example = example;
    } else {
      cfg = harness::default_config(example);
    }
    if (!mode_arg.empty()) cfg.mode = harness::parse_mode(mode_arg);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!m_list.empty()) cfg.m_list = m_list;
    if (!alpha_list.empty()) cfg.alpha_list = alpha_list;
    if (!gamma_list.empty()) cfg.gamma_list = gamma_list;
    if (cfg.mode != harness::Mode::selftest) {
      cfg.validate();
      fs::create_directories(cfg.output_dir);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    switch (cfg.mode) {
      case harness::Mode::state: return run_state(cfg);
      case harness::Mode::kkt: return run_kkt(cfg);
      case harness::Mode::regpath: return run_regpath(cfg);
      case harness::Mode::check: return run_check(cfg);
      case harness::Mode::sweep: return run_sweep_mode(cfg);
      case harness::Mode::selftest: {
        std::cout << "kernels: " << simd::active().name << '\n';
        const auto results = harness::run_selftest(std::cout);
        int failed = 0;
        for (const auto& r : results) failed += r.passed ? 0 : 1;
        std::cout << results.size() - failed << "/" << results.size() << " suites passed\n";
        return failed == 0 ? kOk : kFailure;
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
