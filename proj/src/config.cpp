// config.cpp — parsing of `key = value` parameter files

#include "optoent/config.hpp"

#include "optoent/errors.hpp"
#include "optoent/format.hpp"
#include "optoent/units.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace optoent {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view text, std::size_t line, std::string_view key) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        fail(line, "value for '" + std::string(key) + "' is not a number: '" + std::string(text) + "'");
    }
    return value;
}

enum class Key {
    CavityLength,
    Wavelength,
    Power,
    MechFreq,
    MechDamping,
    QualityFactor,
    Mass,
    Temperature,
    Finesse,
    DetuningOverWm,
    BareDetuning,
    KappaConvention,
};

const std::map<std::string, Key, std::less<>>& key_table() {
    static const std::map<std::string, Key, std::less<>> table{
        {"cavity_length_m", Key::CavityLength},
        {"wavelength_m", Key::Wavelength},
        {"power_w", Key::Power},
        {"mech_freq_2pi_hz", Key::MechFreq},
        {"mech_damping_2pi_hz", Key::MechDamping},
        {"quality_factor", Key::QualityFactor},
        {"mass_kg", Key::Mass},
        {"temperature_k", Key::Temperature},
        {"finesse", Key::Finesse},
        {"detuning_over_wm", Key::DetuningOverWm},
        {"bare_detuning_2pi_hz", Key::BareDetuning},
        {"kappa_convention", Key::KappaConvention},
    };
    return table;
}

} // namespace

PhysicalParams parse_config(std::istream& in) {
    std::map<Key, double> numbers;
    std::optional<KappaConvention> convention;
    std::map<Key, std::size_t> seen;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected `key = value`");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = key_table().find(key);
        if (it == key_table().end()) {
            fail(line_no, "unknown key '" + std::string(key) + "'");
        }
        if (value.empty()) {
            fail(line_no, "missing value for '" + std::string(key) + "'");
        }
        if (const auto prev = seen.find(it->second); prev != seen.end()) {
            fail(line_no, "duplicate key '" + std::string(key) + "' (first on line " +
                              std::to_string(prev->second) + ")");
        }
        seen.emplace(it->second, line_no);

        if (it->second == Key::KappaConvention) {
            try {
                convention = parse_kappa_convention(value);
            } catch (const ConfigError& e) {
                fail(line_no, e.what());
            }
        } else {
            numbers[it->second] = parse_number(value, line_no, key);
        }
    }

    auto get = [&](Key k, const char* name) {
        const auto it = numbers.find(k);
        if (it == numbers.end()) {
            throw ConfigError(std::string("config: missing required key '") + name + "'");
        }
        return it->second;
    };
    auto exactly_one = [&](Key a, Key b, const char* names) {
        const bool has_a = numbers.count(a) != 0;
        const bool has_b = numbers.count(b) != 0;
        if (has_a == has_b) {
            throw ConfigError(std::string("config: exactly one of ") + names + " is required");
        }
        return has_a ? a : b;
    };

    PhysicalParams p;
    p.cavity_length = get(Key::CavityLength, "cavity_length_m");
    p.laser_wavelength = get(Key::Wavelength, "wavelength_m");
    p.input_power = get(Key::Power, "power_w");
    p.mech_freq = units::angular_from_hz(get(Key::MechFreq, "mech_freq_2pi_hz"));
    if (exactly_one(Key::MechDamping, Key::QualityFactor,
                    "mech_damping_2pi_hz, quality_factor") == Key::MechDamping) {
        p.mech_damping = units::angular_from_hz(numbers.at(Key::MechDamping));
    } else {
        const double q = numbers.at(Key::QualityFactor);
        if (!(q > 0.0)) {
            throw ConfigError("config: quality_factor must be > 0");
        }
        p.mech_damping = p.mech_freq / q;
    }
    p.mass = get(Key::Mass, "mass_kg");
    p.temperature = get(Key::Temperature, "temperature_k");
    p.finesse = get(Key::Finesse, "finesse");
    if (exactly_one(Key::DetuningOverWm, Key::BareDetuning,
                    "detuning_over_wm, bare_detuning_2pi_hz") == Key::DetuningOverWm) {
        p.detuning = DetuningSpec::effective(numbers.at(Key::DetuningOverWm) * p.mech_freq);
    } else {
        p.detuning = DetuningSpec::bare(units::angular_from_hz(numbers.at(Key::BareDetuning)));
    }
    if (convention) {
        p.kappa_convention = *convention;
    }
    validate(p);
    return p;
}

PhysicalParams parse_config_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

PhysicalParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

std::string format_config(const PhysicalParams& p) {
    std::ostringstream os;
    os << "cavity_length_m = " << format_double(p.cavity_length) << '\n'
       << "wavelength_m = " << format_double(p.laser_wavelength) << '\n'
       << "power_w = " << format_double(p.input_power) << '\n'
       << "mech_freq_2pi_hz = " << format_double(units::hz_from_angular(p.mech_freq)) << '\n'
       << "mech_damping_2pi_hz = " << format_double(units::hz_from_angular(p.mech_damping)) << '\n'
       << "mass_kg = " << format_double(p.mass) << '\n'
       << "temperature_k = " << format_double(p.temperature) << '\n'
       << "finesse = " << format_double(p.finesse) << '\n';
    if (p.detuning.kind == DetuningSpec::Kind::Effective) {
        os << "detuning_over_wm = " << format_double(p.detuning.value / p.mech_freq) << '\n';
    } else {
        os << "bare_detuning_2pi_hz = " << format_double(units::hz_from_angular(p.detuning.value))
           << '\n';
    }
    os << "kappa_convention = " << to_string(p.kappa_convention) << '\n';
    return os.str();
}

} // namespace optoent
