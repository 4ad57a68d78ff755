// constants.hpp — physical constants and shared numerical thresholds

#pragma once

#include <algorithm>
#include <numbers>

namespace optoent {

namespace constants {

inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J / K
inline constexpr double speed_of_light = 2.99792458e8; // m / s
inline constexpr double pi = std::numbers::pi;

} // namespace constants

// Eigenvalues with real part above -margin count as unstable.
inline constexpr double kStabilityMarginFactor = 1e-6;

inline double stability_margin(double mech_freq, double kappa) noexcept {
    return kStabilityMarginFactor * std::max(mech_freq, kappa);
}

// hbar*w/(k_B T) above this gives an occupation below 1e-300; reported as 0.
inline constexpr double kMaxBoltzmannExponent = 700.0;

// E_N below this counts as separable when locating entanglement thresholds.
inline constexpr double kLogNegZeroFloor = 1e-6;

// Half-width of the band around the Simon boundary treated as separable.
inline constexpr double kSimonBoundaryBand = 1e-9;

} // namespace optoent
