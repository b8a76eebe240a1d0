#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nsoc::harness {

enum class Mode { state, kkt, regpath, check, sweep, selftest };

Mode parse_mode(const std::string& name);  // ConfigError on unknown names
std::string to_string(Mode mode);

// How errors against the manufactured solution are measured.
//   interpolant: ||v_h - I_h v||_L2 of the P1 difference (the published tables)
//   continuous:  ||v_h - v||_L2 with the closed form under a degree-4 rule
enum class ErrorNorm { interpolant, continuous };

struct Tolerances {
  double tol_residual = 1e-12;
  int max_iter = 25;
  double tol_p_critical = 1e-14;
  double zero_tol = 1e-12;
};

// Data of a user-defined problem without known solution: each field is a
// constant or a vector of interior nodal values.
struct CustomData {
  std::variant<double, std::vector<double>> f = 0.0;
  std::variant<double, std::vector<double>> y_d = 0.0;
};

struct RunConfig {
  int example = 1;  // 1, 2, or 0 for custom
  std::optional<CustomData> custom;
  std::vector<int> m_list{33, 65, 129, 257};
  std::vector<double> alpha_list{1e-4};
  std::vector<double> gamma_list{1e-4};
  std::vector<double> eps_schedule{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  Mode mode = Mode::sweep;
  std::filesystem::path output_dir = "out";
  Tolerances tolerances;
  ErrorNorm error_norm = ErrorNorm::interpolant;

  // Throws ConfigError: empty lists, m < 2, even m for examples 1 and 2,
  // non-positive parameters, custom example without custom data.
  void validate() const;
};

// Defaults reproduce the first block of the published table for the example
// (gamma = 1e-12 for example 2).
RunConfig default_config(int example);

// Keys: example (1, 2 or "custom"), mode, m, alpha, gamma, eps_schedule,
// output_dir, error_norm, tolerances{tol_residual, max_iter, tol_p_critical,
// zero_tol}, custom{f, y_d}. Missing keys keep their defaults. Throws
// ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace nsoc::harness
