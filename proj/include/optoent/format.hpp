// format.hpp — shortest round-trip number formatting for CSV and reports

#pragma once

#include <optional>
#include <string>

namespace optoent {

// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

// Empty string for an absent value.
std::string format_optional(const std::optional<double>& x);

inline const char* format_bool(bool b) { return b ? "true" : "false"; }

} // namespace optoent
