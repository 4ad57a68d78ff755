// model.hpp — experimental parameters, steady state and linearized drift/diffusion
//
// Quadrature ordering used throughout: u = (dq, dp, dX, dY), mirror first,
// cavity second. Vacuum variance of every quadrature is 1/2. All frequencies
// are angular (rad/s); inputs quoted as w/2pi are converted in config.cpp.

#pragma once

#include "optoent/linalg.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace optoent {

// How the cavity amplitude decay rate is obtained from the finesse.
//   FullWidth: kappa = pi c / (F L)      (FSR / F, the default)
//   HalfWidth: kappa = pi c / (2 F L)
enum class KappaConvention { FullWidth, HalfWidth };

std::string_view to_string(KappaConvention c) noexcept;
KappaConvention parse_kappa_convention(std::string_view s);

struct DetuningSpec {
    enum class Kind { Effective, Bare };
    Kind kind = Kind::Effective;
    double value = 0.0; // rad/s

    static DetuningSpec effective(double delta) { return {Kind::Effective, delta}; }
    static DetuningSpec bare(double delta0) { return {Kind::Bare, delta0}; }
};

struct PhysicalParams {
    double cavity_length = 0.0;     // m
    double laser_wavelength = 0.0;  // m
    double input_power = 0.0;       // W
    double mech_freq = 0.0;         // rad/s
    double mech_damping = 0.0;      // rad/s
    double mass = 0.0;              // kg
    double temperature = 0.0;       // K
    double finesse = 0.0;
    DetuningSpec detuning;
    KappaConvention kappa_convention = KappaConvention::FullWidth;

    double quality_factor() const noexcept;
};

// Throws ConfigError naming the first violated invariant. Q must exceed 10 for
// the white-noise Brownian bath to be a valid approximation.
void validate(const PhysicalParams& p);

// Constants fixed by the parameters and the bare detuning.
struct ModelConstants {
    double kappa = 0.0;         // rad/s
    double laser_freq = 0.0;    // w0, rad/s
    double cavity_freq = 0.0;   // w_c = w0 + Delta0, rad/s
    double bare_coupling = 0.0; // G0, rad/s
    double drive = 0.0;         // |E|, rad/s
    double nbar = 0.0;
    double bare_detuning = 0.0; // Delta0, rad/s
};

struct DerivedModel {
    ModelConstants constants;
    double mech_freq = 0.0;
    double mech_damping = 0.0;
    double alpha_s = 0.0;       // real intracavity amplitude
    double detuning = 0.0;      // effective Delta, rad/s
    double displacement = 0.0;  // q_s
    double coupling = 0.0;      // G = sqrt(2) G0 alpha_s
    Mat4 drift = Mat4::Zero();
    Mat4 diffusion = Mat4::Zero();

    double kappa() const noexcept { return constants.kappa; }
    double nbar() const noexcept { return constants.nbar; }
};

struct SteadyStateBranch {
    double intensity = 0.0;  // alpha_s^2
    double detuning = 0.0;   // effective Delta
    bool stable = false;
    std::size_t branch_index = 0;
};

double cavity_decay_rate(double finesse, double length, KappaConvention convention);

// Bose occupation at the mechanical frequency; 0 at T = 0 and beyond the
// overflow cutoff.
double thermal_occupation(double mech_freq, double temperature);

// Constants for p. With a bare detuning the cavity frequency follows directly;
// with an effective detuning the bare detuning (and hence w_c and G0) is
// resolved self-consistently.
ModelConstants derive_constants(const PhysicalParams& p);

// Same, for an explicitly given bare detuning (p.detuning ignored).
ModelConstants derive_constants_for_bare(const PhysicalParams& p, double bare_detuning);

// All non-negative intensities solving x (kappa^2 + (Delta0 - G0^2 x / w_m)^2) = E^2,
// ascending, each with its linearized-stability verdict.
std::vector<SteadyStateBranch> solve_steady_state(const PhysicalParams& p, double bare_detuning);

// Full model at a prescribed effective detuning; the implied bare detuning is
// stored in constants.bare_detuning.
DerivedModel steady_state_from_detuning(const PhysicalParams& p, double detuning);

// Full model on a given steady-state branch of the bare-detuning problem.
DerivedModel model_on_branch(const PhysicalParams& p, double bare_detuning, double intensity);

Mat4 build_drift(const DerivedModel& d);
Mat4 build_diffusion(const DerivedModel& d);

struct ResolvedModel {
    DerivedModel model;
    std::size_t branch_count = 1;
};

// Resolves p.detuning. Effective: the branch with that detuning. Bare: the
// lowest-intensity stable branch, or branch 0 when none is stable.
ResolvedModel resolve_model(const PhysicalParams& p);

} // namespace optoent
