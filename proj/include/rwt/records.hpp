#pragma once

#include "rwt/datasets.hpp"
#include "rwt/estimation.hpp"
#include "rwt/robustness.hpp"
#include "rwt/simulation.hpp"
#include "rwt/wald_tests.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace rwt {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
std::string toolkit_version();

// Non-finite doubles become null; everything else uses the shortest
// representation that parses back to the same double.
Json to_json(double v);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const MdpdeFit& fit);
Json to_json(const TestResult& result);
Json to_json(const BetaSelection& selection);
Json to_json(const SimulationConfig& config);
Json to_json(const SimulationReport& report);
Json to_json(const SensitivityReport& report);
Json to_json(const TwoSampleDataset& data);

SimulationConfig simulation_config_from_json(const Json& j);

struct RunRecord {
    std::string command;
    Json options = Json::object();
    Json result = Json::object();
    std::string version = toolkit_version();
    std::optional<std::string> timestamp;
};

Json to_json(const RunRecord& record);
RunRecord record_from_json(const Json& j);

/// Canonical text form: two-space indent, trailing newline.
std::string serialize(const Json& j);

/// Flat CSV of the simulation cells (and histograms when present).
std::string simulation_csv(const SimulationReport& report);

}  // namespace rwt
