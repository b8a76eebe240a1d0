#include "nsoc/harness/config.hpp"

#include "nsoc/errors.hpp"

#include <algorithm>
#include <fstream>

namespace nsoc::harness {

namespace {

template <class T>
std::vector<T> read_list(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

std::variant<double, std::vector<double>> read_field(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array()) return j.get<std::vector<double>>();
  throw ConfigError("custom field must be a number or an array of nodal values");
}

template <class T>
bool all_positive(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](T x) { return x > 0; });
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "state") return Mode::state;
  if (name == "kkt") return Mode::kkt;
  if (name == "regpath") return Mode::regpath;
  if (name == "check") return Mode::check;
  if (name == "sweep") return Mode::sweep;
  if (name == "selftest") return Mode::selftest;
  throw ConfigError("unknown mode '" + name + "'");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::state: return "state";
    case Mode::kkt: return "kkt";
    case Mode::regpath: return "regpath";
    case Mode::check: return "check";
    case Mode::sweep: return "sweep";
    case Mode::selftest: return "selftest";
  }
  return "?";
}

void RunConfig::validate() const {
  if (example < 0 || example > 2) throw ConfigError("example must be 1, 2 or custom");
  if (example == 0 && !custom) throw ConfigError("custom example needs a 'custom' block with f and y_d");
  if (m_list.empty()) throw ConfigError("m list is empty");
  if (alpha_list.empty()) throw ConfigError("alpha list is empty");
  if (gamma_list.empty()) throw ConfigError("gamma list is empty");
  for (int m : m_list) {
    if (m < 2) throw ConfigError("m must be at least 2, got " + std::to_string(m));
    if (example != 0 && m % 2 == 0)
      throw ConfigError("examples 1 and 2 need odd m so that no node sits on a zero line, got " + std::to_string(m));
  }
  if (!all_positive(alpha_list)) throw ConfigError("alpha values must be positive");
  if (!all_positive(gamma_list)) throw ConfigError("gamma values must be positive");
  if (mode == Mode::regpath) {
    if (eps_schedule.empty()) throw ConfigError("eps schedule is empty");
    if (!all_positive(eps_schedule) || !std::is_sorted(eps_schedule.rbegin(), eps_schedule.rend()) ||
        std::adjacent_find(eps_schedule.begin(), eps_schedule.end()) != eps_schedule.end())
      throw ConfigError("eps schedule must be positive and strictly decreasing");
  }
  if (!(tolerances.tol_residual > 0.0) || tolerances.max_iter <= 0 || !(tolerances.tol_p_critical > 0.0) ||
      !(tolerances.zero_tol >= 0.0))
    throw ConfigError("invalid tolerance override");
  if (example == 0) {
    const std::size_t n = static_cast<std::size_t>(m_list.front() - 1) * (m_list.front() - 1);
    for (const auto* field : {&custom->f, &custom->y_d})
      if (const auto* v = std::get_if<std::vector<double>>(field)) {
        if (m_list.size() != 1) throw ConfigError("nodal custom data requires a single m");
        if (v->size() != n) throw ConfigError("custom nodal data has wrong length");
      }
  }
}

RunConfig default_config(int example) {
  RunConfig cfg;
  cfg.example = example;
  if (example == 2) cfg.gamma_list = {1e-12};
  return cfg;
}

RunConfig parse_config(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    int example = 1;
    if (j.contains("example")) {
      const auto& e = j.at("example");
      if (e.is_string() && e.get<std::string>() == "custom")
        example = 0;
      else if (e.is_number_integer())
        example = e.get<int>();
      else if (e.is_string())
        example = std::stoi(e.get<std::string>());
      else
        throw ConfigError("example must be 1, 2 or \"custom\"");
    }
    RunConfig cfg = default_config(example);
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("m")) cfg.m_list = read_list<int>(j, "m");
    if (j.contains("alpha")) cfg.alpha_list = read_list<double>(j, "alpha");
    if (j.contains("gamma")) cfg.gamma_list = read_list<double>(j, "gamma");
    if (j.contains("eps_schedule")) cfg.eps_schedule = read_list<double>(j, "eps_schedule");
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("error_norm")) {
      const auto name = j.at("error_norm").get<std::string>();
      if (name == "interpolant")
        cfg.error_norm = ErrorNorm::interpolant;
      else if (name == "continuous")
        cfg.error_norm = ErrorNorm::continuous;
      else
        throw ConfigError("error_norm must be 'interpolant' or 'continuous'");
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      cfg.tolerances.tol_residual = t.value("tol_residual", cfg.tolerances.tol_residual);
      cfg.tolerances.max_iter = t.value("max_iter", cfg.tolerances.max_iter);
      cfg.tolerances.tol_p_critical = t.value("tol_p_critical", cfg.tolerances.tol_p_critical);
      cfg.tolerances.zero_tol = t.value("zero_tol", cfg.tolerances.zero_tol);
    }
    if (j.contains("custom")) {
      const auto& c = j.at("custom");
      CustomData data;
      if (c.contains("f")) data.f = read_field(c.at("f"));
      if (c.contains("y_d")) data.y_d = read_field(c.at("y_d"));
      cfg.custom = std::move(data);
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["example"] = cfg.example == 0 ? nlohmann::json("custom") : nlohmann::json(cfg.example);
  j["mode"] = to_string(cfg.mode);
  j["m"] = cfg.m_list;
  j["alpha"] = cfg.alpha_list;
  j["gamma"] = cfg.gamma_list;
  j["eps_schedule"] = cfg.eps_schedule;
  j["output_dir"] = cfg.output_dir.string();
  j["error_norm"] = cfg.error_norm == ErrorNorm::interpolant ? "interpolant" : "continuous";
  j["tolerances"] = {{"tol_residual", cfg.tolerances.tol_residual},
                     {"max_iter", cfg.tolerances.max_iter},
                     {"tol_p_critical", cfg.tolerances.tol_p_critical},
                     {"zero_tol", cfg.tolerances.zero_tol}};
  return j;
}

}  // namespace nsoc::harness
