// sweep.hpp — one-dimensional parameter sweeps, named presets, thresholds

#pragma once

#include "optoent/entanglement.hpp"
#include "optoent/model.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace optoent {

enum class SweepAxis { DetuningOverWm, TemperatureK, MassKg, QualityFactor };

std::string_view to_string(SweepAxis axis) noexcept;
SweepAxis parse_sweep_axis(std::string_view name);

// base with the axis quantity replaced. The detuning axis always sets an
// effective detuning, value * w_m.
PhysicalParams with_axis_value(PhysicalParams base, SweepAxis axis, double value);

struct SweepSpec {
    PhysicalParams base;
    SweepAxis axis = SweepAxis::DetuningOverWm;
    std::vector<double> grid;
    bool dump_cm = false;
    unsigned jobs = 0; // 0 = hardware concurrency
};

// Non-empty, finite, strictly monotone grid; base parameters valid.
void validate(const SweepSpec& spec);

struct SweepRow {
    double axis_value = 0.0;
    double delta_over_wm = 0.0;
    double temperature_k = 0.0;
    double mass_kg = 0.0;
    double finesse = 0.0;
    double kappa = 0.0;
    double coupling = 0.0;
    double nbar = 0.0;
    bool stable = false;
    std::optional<double> eta_minus;
    std::optional<double> log_neg;
    std::optional<bool> simon;
    std::size_t branches = 1;
    std::optional<Mat4> cm;
};

// Model, stability, covariance and entanglement at one parameter point.
// Entanglement fields stay empty when the point is unstable.
SweepRow evaluate_point(const PhysicalParams& p, double axis_value, bool keep_cm = false);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::vector<double> linear_grid(double lo, double hi, std::size_t points);
std::vector<double> log_grid(double lo, double hi, std::size_t points);

// Cavity, laser and mirror parameters shared by the named presets:
// L = 1 mm, lambda = 810 nm, P = 50 mW, w_m/2pi = 10 MHz,
// gamma_m/2pi = 100 Hz, T = 400 mK, effective detuning w_m.
PhysicalParams preset_params(double mass_kg, double finesse);

// fig1-5ng, fig1-50ng: E_N against Delta/w_m on 200 points in [0.1, 3].
// fig2-5ng (Delta = w_m), fig2-50ng (Delta = w_m/2): E_N against T on 100
// log-spaced points in [0.1 K, 40 K].
SweepSpec preset(std::string_view name);
std::vector<std::string_view> preset_names();

// Boundary of a predicate that holds at lo and fails at hi, to absolute
// tolerance abs_tol. Returns the upper end of the final bracket.
double bisect_boundary(const std::function<bool(double)>& holds, double lo, double hi,
                       double abs_tol);

// Smallest axis value with E_N below the numerical floor, by bisection on
// [lo, hi] to (hi - lo) * 1e-4. Unstable points count as not entangled.
// Throws BracketInvalid unless the state is entangled at lo and not at hi.
double find_threshold(const SweepSpec& spec, double lo, double hi);

std::string csv_header();
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
// 16 row-major covariance entries per row; empty fields for unstable rows.
void write_cm_dump(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace optoent
