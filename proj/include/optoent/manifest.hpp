// manifest.hpp — JSON sidecar describing how an output file was produced

#pragma once

#include "optoent/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace optoent {

struct RunManifest {
    std::string command;
    std::vector<std::string> command_line;
    std::optional<PhysicalParams> params;
    std::optional<DerivedModel> model;
    std::optional<std::uint64_t> master_seed;
    std::vector<std::uint64_t> seeds;
    nlohmann::json extra = nlohmann::json::object();
    std::string started_utc;
    std::string finished_utc;
};

// Current UTC time as ISO 8601, second resolution.
std::string utc_timestamp();

nlohmann::json params_to_json(const PhysicalParams& p);
nlohmann::json model_to_json(const DerivedModel& d);
nlohmann::json to_json(const RunManifest& m);

// "<output>.manifest.json"
std::string manifest_path(const std::string& output_path);

// Writes the sidecar next to output_path. Throws ConfigError when the file
// cannot be written.
void write_manifest(const std::string& output_path, const RunManifest& m);

} // namespace optoent
