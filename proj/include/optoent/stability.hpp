// stability.hpp — Routh-Hurwitz conditions and spectral check of the drift matrix

#pragma once

#include "optoent/linalg.hpp"
#include "optoent/model.hpp"

#include <string>

namespace optoent {

struct RouthHurwitz {
    // Hurwitz determinant a1 a2 a3 - a3^2 - a1^2 a4 of the characteristic
    // polynomial of the drift matrix.
    double condition_1 = 0.0;
    // Constant coefficient a4 = det A.
    double condition_2 = 0.0;

    bool stable() const noexcept { return condition_1 > 0.0 && condition_2 > 0.0; }
};

// Both nontrivial conditions; the remaining Hurwitz minors are positive for
// any kappa > 0, gamma_m >= 0.
RouthHurwitz routh_hurwitz(double mech_freq, double mech_damping, double kappa, double detuning,
                           double coupling) noexcept;

struct StabilityReport {
    double rh_condition_1 = 0.0;
    double rh_condition_2 = 0.0;
    double eig_max_real = 0.0;
    double margin = 0.0;
    bool stable_rh = false;
    bool stable_eig = false;
    bool agree = false;

    // The spectral verdict wins when the two paths disagree.
    bool stable() const noexcept { return stable_eig; }
    // Names the violated Routh-Hurwitz condition(s), or the spectral reason.
    std::string failure_reason() const;
};

StabilityReport stability_rh(const DerivedModel& d);

double stability_eig(const Mat4& a);

// Both paths, compared.
StabilityReport analyze_stability(const DerivedModel& d);

} // namespace optoent
