#pragma once

// JSON mapping for the scenario file format. Internal to the library; the
// config loader in experiment.cpp reuses the overlay functions so that a
// config's partial objects and a scenario file share one schema.

#include <string>

#include <json.hpp>

#include "uavmec/scenario.hpp"

namespace uavmec::detail {

using json = nlohmann::json;

json to_json(const SystemParams& params);
json to_json(const UeProfile& ue);
json to_json(const UavProfile& uav);
json to_json(const Scenario& scenario);

// Overlay keys present in `j` onto `out`. Unknown keys and type mismatches
// raise ParseError with `path` prefixed to the field name.
void overlay(const json& j, SystemParams& out, const std::string& path);
void overlay(const json& j, UeProfile& out, const std::string& path);
void overlay(const json& j, UavProfile& out, const std::string& path);

// Full scenario; `latency_s`, `ues`, `uavs` are required, everything else defaults.
Scenario scenario_from_json(const json& j, const std::string& source);

}  // namespace uavmec::detail
