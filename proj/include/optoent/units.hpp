// units.hpp — conversions between the quoted laboratory units and SI/angular

#pragma once

#include "optoent/constants.hpp"

namespace optoent::units {

inline constexpr double two_pi = 2.0 * constants::pi;

inline constexpr double angular_from_hz(double hz) { return two_pi * hz; }
inline constexpr double hz_from_angular(double w) { return w / two_pi; }
inline constexpr double angular_from_mhz(double mhz) { return two_pi * mhz * 1e6; }

inline constexpr double kg_from_ng(double ng) { return ng * 1e-12; }
inline constexpr double ng_from_kg(double kg) { return kg * 1e12; }
inline constexpr double w_from_mw(double mw) { return mw * 1e-3; }
inline constexpr double m_from_mm(double mm) { return mm * 1e-3; }
inline constexpr double m_from_nm(double nm) { return nm * 1e-9; }
inline constexpr double k_from_mk(double mk) { return mk * 1e-3; }

} // namespace optoent::units
