// config.hpp — line-oriented `key = value` parameter files
//
//   cavity_length_m, wavelength_m, power_w, mech_freq_2pi_hz,
//   mech_damping_2pi_hz | quality_factor, mass_kg, temperature_k, finesse,
//   detuning_over_wm | bare_detuning_2pi_hz, kappa_convention (optional)
//
// `#` starts a comment; blank lines are ignored; unknown or repeated keys are
// errors (ConfigError, message carries the line number).

#pragma once

#include "optoent/model.hpp"

#include <istream>
#include <string>
#include <string_view>

namespace optoent {

PhysicalParams parse_config(std::istream& in);
PhysicalParams parse_config_string(std::string_view text);
PhysicalParams load_config(const std::string& path);

// Round-trippable text form of p (keys as accepted by parse_config).
std::string format_config(const PhysicalParams& p);

} // namespace optoent
