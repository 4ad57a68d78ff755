// manifest.cpp — run manifest serialization

#include "optoent/manifest.hpp"

#include "optoent/errors.hpp"
#include "optoent/version.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

namespace optoent {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json params_to_json(const PhysicalParams& p) {
    nlohmann::json j;
    j["cavity_length_m"] = p.cavity_length;
    j["wavelength_m"] = p.laser_wavelength;
    j["power_w"] = p.input_power;
    j["mech_freq_rad_s"] = p.mech_freq;
    j["mech_damping_rad_s"] = p.mech_damping;
    j["mass_kg"] = p.mass;
    j["temperature_k"] = p.temperature;
    j["finesse"] = p.finesse;
    j["detuning_kind"] = p.detuning.kind == DetuningSpec::Kind::Effective ? "effective" : "bare";
    j["detuning_rad_s"] = p.detuning.value;
    j["kappa_convention"] = std::string(to_string(p.kappa_convention));
    return j;
}

nlohmann::json model_to_json(const DerivedModel& d) {
    nlohmann::json j;
    j["kappa_rad_s"] = d.constants.kappa;
    j["laser_freq_rad_s"] = d.constants.laser_freq;
    j["cavity_freq_rad_s"] = d.constants.cavity_freq;
    j["G0_rad_s"] = d.constants.bare_coupling;
    j["drive_rad_s"] = d.constants.drive;
    j["nbar"] = d.constants.nbar;
    j["bare_detuning_rad_s"] = d.constants.bare_detuning;
    j["alpha_s"] = d.alpha_s;
    j["detuning_rad_s"] = d.detuning;
    j["q_s"] = d.displacement;
    j["G_rad_s"] = d.coupling;
    return j;
}

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json j;
    j["tool"] = "optoent";
    j["version"] = kVersion;
    j["command"] = m.command;
    j["command_line"] = m.command_line;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    if (m.params) {
        j["parameters"] = params_to_json(*m.params);
    }
    if (m.model) {
        j["derived"] = model_to_json(*m.model);
    }
    if (m.master_seed) {
        j["master_seed"] = *m.master_seed;
        j["trajectory_seeds"] = m.seeds;
    }
    if (!m.extra.empty()) {
        j["run"] = m.extra;
    }
    return j;
}

std::string manifest_path(const std::string& output_path) {
    return output_path + ".manifest.json";
}

void write_manifest(const std::string& output_path, const RunManifest& m) {
    const std::string path = manifest_path(output_path);
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write manifest '" + path + "'");
    }
    out << to_json(m).dump(2) << '\n';
    if (!out) {
        throw ConfigError("failed writing manifest '" + path + "'");
    }
}

} // namespace optoent
