// readout.hpp — second (readout) cavity, adiabatic output relation, and
// covariance reconstruction from simulated stochastic trajectories
//
// Extended ordering u = (dq, dp, dX, dY, dX2, dY2). The readout cavity obeys
// d a2/dt = -(kappa2 + i Delta2) a2 + i G2 alpha2 dq + sqrt(2 kappa2) a2_in.
//
// For linear dynamics driven by Gaussian white noise, a classical ensemble
// whose increments have covariance D dt reproduces the symmetrized quantum
// second moments exactly, so trajectory statistics estimate V directly.

#pragma once

#include "optoent/entanglement.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace optoent {

struct ReadoutParams {
    double kappa2 = 0.0;       // rad/s
    double detuning2 = 0.0;    // rad/s
    double alpha2 = 0.0;       // intracavity amplitude, >= 0
    double length2 = 0.0;      // m
    double cavity_freq2 = 0.0; // rad/s
    double coupling2 = 0.0;    // G2 = (w_c2 / L2) sqrt(hbar / (m w_m)), rad/s

    // Regime flags, evaluated by make_readout.
    bool rwa_ok = false;                 // Delta2 = w_m
    bool adiabatic_ok = false;           // w_m / kappa2 >= 10 and kappa2 / (G2 alpha2 / sqrt 2) >= 10
    bool back_action_negligible = false; // |alpha2| <= 0.01 |alpha_s|
    std::vector<std::string> regime_failures;

    // G2 alpha2 / sqrt 2, the rate appearing in the rotating-frame coupling.
    double readout_rate() const noexcept;
};

inline constexpr double kRegimeRatio = 10.0;
inline constexpr double kBackActionRatio = 0.01;

// Throws ConfigError for a negative alpha2 or non-positive kappa2, L2, w_c2.
ReadoutParams make_readout(const PhysicalParams& p, const DerivedModel& d, double kappa2,
                           double detuning2, double alpha2, double length2, double cavity_freq2);

// kappa2 = w_m / 20, Delta2 = w_m, L2 = L, w_c2 = w_c, and alpha2 chosen so
// that G2 alpha2 / sqrt 2 = kappa2 / 20.
ReadoutParams default_readout(const PhysicalParams& p, const DerivedModel& d);

// alpha2 giving G2 alpha2 / sqrt 2 = rate for the readout geometry in r.
double alpha2_for_rate(const ReadoutParams& r, double rate);

struct ExtendedModel {
    Mat6 drift = Mat6::Zero();
    Mat6 diffusion = Mat6::Zero(); // diag(0, gamma_m (2 nbar + 1), kappa, kappa, kappa2, kappa2)
};

// The mirror momentum row gains G2 alpha2 sqrt 2 dX2 only with back_action;
// otherwise the upper-left 4x4 block is the primary drift exactly.
ExtendedModel build_extended(const DerivedModel& d, const ReadoutParams& r, bool back_action);

// Stationary 6x6 covariance of the extended model.
Mat6 solve_extended(const ExtendedModel& m);

// G2 alpha2 / sqrt(kappa2). Throws RegimeViolation naming each failed
// inequality when the rotating-wave or adiabatic conditions do not hold.
double adiabatic_output_gain(const ReadoutParams& r);

// Variance of the output quadrature integrated over a temporal mode of
// length window (normalized by 1/sqrt(window)), for a rotating-frame mirror
// quadrature of variance mirror_var that is constant over the window:
// gain^2 window mirror_var + 1/2.
double predicted_output_variance(double gain, double mirror_var, double window);

enum class Integrator {
    Exact,         // exact Gaussian transition of the linear SDE over each step
    EulerMaruyama, // u += A u dt + dW
};

enum class InitialState {
    Zero,       // start at the steady state of the means; relies on burn-in
    Stationary, // draw from the stationary covariance
};

struct TrajectoryConfig {
    double dt = 0.0;          // s
    double burn_in = 0.0;     // s
    double sample_time = 0.0; // s
    std::size_t n_traj = 0;
    std::uint64_t seed = 0;
    unsigned jobs = 0; // 0 = hardware concurrency
    Integrator integrator = Integrator::Exact;
    // Each step draws its noise as this many sub-increments of dt / k. A run
    // at (dt, k) and one at (dt / k, 1) with the same seed follow the same
    // noise path.
    unsigned noise_substeps = 1;
    InitialState initial = InitialState::Zero;
};

inline constexpr std::uint64_t kDefaultSeed = 20070101;

// Relaxation rate of second moments: 2 |max Re lambda(A_ext)|.
double relaxation_rate(const ExtendedModel& m);

// dt = 0.01 / max(w_m, kappa, kappa2, |Delta|), burn-in 20 / relaxation rate,
// sample time 1000 / relaxation rate, 32 trajectories.
TrajectoryConfig default_trajectory_config(const DerivedModel& d, const ReadoutParams& r,
                                           const ExtendedModel& m);

// Throws StepTooLarge when dt > 0.01 / max(w_m, kappa, kappa2, |Delta|) or
// max |lambda(A_ext)| dt > 0.1, ConfigError when the sample time is below
// 50 relaxation times, fewer than two trajectories are requested, or a
// duration is negative.
void validate(const TrajectoryConfig& c, const DerivedModel& d, const ReadoutParams& r,
              const ExtendedModel& m);

struct CMEstimate {
    Mat4 mean = Mat4::Zero();   // symmetrized
    Mat4 std_error = Mat4::Zero(); // per-entry standard error over trajectories
    std::size_t n_traj = 0;
    std::size_t samples_per_traj = 0;
};

// Per-trajectory seed derived from the master seed by splitmix64 mixing.
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

// Time averages of u u^T (first four variables) after burn-in, one per
// trajectory; the estimate is their mean and standard error. Throws
// UnstableSystem when A_ext is not Hurwitz. No validation of c is done here
// beyond positivity of dt and n_traj; callers use validate().
CMEstimate simulate_trajectories(const ExtendedModel& m, const TrajectoryConfig& c);

struct ReconstructedEntanglement {
    EntanglementReport report;
    double log_neg_sigma = 0.0;
    double eta_minus_sigma = 0.0;
    double min_symplectic_eigenvalue = 0.0;
};

inline constexpr std::size_t kResamples = 200;

// Entanglement of the estimate, with uncertainty from kResamples Gaussian
// resamples of the ten independent entries. Throws UnphysicalState when the
// smallest symplectic eigenvalue lies more than three resampled standard
// deviations below 1/2.
ReconstructedEntanglement reconstruct_entanglement(const CMEstimate& est,
                                                   std::uint64_t seed = kDefaultSeed);

struct OutputWindowConfig {
    double dt = 0.0;     // s
    double window = 0.0; // s
    std::size_t n_traj = 0;
    std::uint64_t seed = kDefaultSeed;
    unsigned jobs = 0;
};

struct OutputWindowEstimate {
    double variance_x = 0.0; // rotating-frame X output mode
    double stderr_x = 0.0;
    double variance_y = 0.0; // rotating-frame Y output mode
    double stderr_y = 0.0;
    std::size_t n_traj = 0;
};

// Simulated output-field experiment. Each trajectory starts from the
// stationary state, evolves the lab-frame readout quadratures together with
// the integrated output field a2_out = sqrt(2 kappa2) a2 - a2_in, rotates the
// output into the frame at Delta2, and integrates it over one window into
// the mode O = window^{-1/2} int X~_out dt (and likewise for Y).
OutputWindowEstimate simulate_output_windows(const ExtendedModel& m, const ReadoutParams& r,
                                             const OutputWindowConfig& c);

} // namespace optoent
