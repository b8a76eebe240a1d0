#pragma once

#include "nsoc/harness/sweep.hpp"
#include "nsoc/newton_report.hpp"
#include "nsoc/regpath/regularization_path.hpp"
#include "nsoc/stationarity/checks.hpp"

#include <json.hpp>

#include <filesystem>

namespace nsoc::harness {

nlohmann::json to_json(const NewtonReport& r);
nlohmann::json to_json(const ExperimentRow& r);
nlohmann::json to_json(const regpath::PathReport& r);
nlohmann::json to_json(const stationarity::ChiAdmissibilityReport& r);
nlohmann::json to_json(const stationarity::StrongSignReport& r);
nlohmann::json to_json(const stationarity::PrimalStationarityReport& r);
nlohmann::json to_json(const state::FiniteDifferenceReport& r);

// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace nsoc::harness
