#include "optoent/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace optoent {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string format_optional(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string();
}

} // namespace optoent
