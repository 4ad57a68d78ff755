// version.hpp — library and tool version string

#pragma once

namespace optoent {

inline constexpr const char* kVersion = "1.0.0";

} // namespace optoent
