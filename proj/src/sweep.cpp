// sweep.cpp — sweep evaluation, presets, threshold bisection, CSV output

#include "optoent/sweep.hpp"

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"
#include "optoent/format.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/parallel.hpp"
#include "optoent/stability.hpp"
#include "optoent/units.hpp"

#include <cmath>
#include <sstream>

namespace optoent {

std::string_view to_string(SweepAxis axis) noexcept {
    switch (axis) {
    case SweepAxis::DetuningOverWm:
        return "detuning_over_wm";
    case SweepAxis::TemperatureK:
        return "temperature_k";
    case SweepAxis::MassKg:
        return "mass_kg";
    case SweepAxis::QualityFactor:
        return "quality_factor";
    }
    return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
    for (SweepAxis a : {SweepAxis::DetuningOverWm, SweepAxis::TemperatureK, SweepAxis::MassKg,
                        SweepAxis::QualityFactor}) {
        if (name == to_string(a)) {
            return a;
        }
    }
    throw ConfigError("unknown sweep axis '" + std::string(name) +
                      "' (expected detuning_over_wm, temperature_k, mass_kg or quality_factor)");
}

PhysicalParams with_axis_value(PhysicalParams base, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::DetuningOverWm:
        base.detuning = DetuningSpec::effective(value * base.mech_freq);
        break;
    case SweepAxis::TemperatureK:
        base.temperature = value;
        break;
    case SweepAxis::MassKg:
        base.mass = value;
        break;
    case SweepAxis::QualityFactor:
        base.mech_damping = base.mech_freq / value;
        break;
    }
    return base;
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    if (spec.grid.empty()) {
        throw ConfigError("sweep grid is empty");
    }
    for (double v : spec.grid) {
        if (!std::isfinite(v)) {
            throw ConfigError("sweep grid contains a non-finite value");
        }
    }
    if (spec.grid.size() > 1) {
        const bool up = spec.grid[1] > spec.grid[0];
        for (std::size_t i = 1; i < spec.grid.size(); ++i) {
            const bool step_up = spec.grid[i] > spec.grid[i - 1];
            if (spec.grid[i] == spec.grid[i - 1] || step_up != up) {
                throw ConfigError("sweep grid must be strictly monotone");
            }
        }
    }
}

SweepRow evaluate_point(const PhysicalParams& p, double axis_value, bool keep_cm) {
    const ResolvedModel resolved = resolve_model(p);
    const DerivedModel& m = resolved.model;

    SweepRow row;
    row.axis_value = axis_value;
    row.delta_over_wm = m.detuning / m.mech_freq;
    row.temperature_k = p.temperature;
    row.mass_kg = p.mass;
    row.finesse = p.finesse;
    row.kappa = m.kappa();
    row.coupling = m.coupling;
    row.nbar = m.nbar();
    row.branches = resolved.branch_count;
    row.stable = analyze_stability(m).stable();
    if (!row.stable) {
        return row;
    }

    const CovarianceMatrix v = solve_lyapunov(m);
    const EntanglementReport e = analyze_entanglement(v);
    row.eta_minus = e.eta_minus;
    row.log_neg = e.log_neg;
    row.simon = e.simon_entangled;
    if (keep_cm) {
        row.cm = v.matrix();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<SweepRow> rows(spec.grid.size());
    parallel_for(spec.grid.size(), spec.jobs, [&](std::size_t i) {
        const double x = spec.grid[i];
        rows[i] = evaluate_point(with_axis_value(spec.base, spec.axis, x), x, spec.dump_cm);
    });
    return rows;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points == 0) {
        throw ConfigError("grid needs at least one point");
    }
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = lo + step * static_cast<double>(i);
    }
    g.back() = hi;
    return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi > 0.0)) {
        throw ConfigError("log grid needs positive end points");
    }
    std::vector<double> g = linear_grid(std::log(lo), std::log(hi), points);
    for (double& v : g) {
        v = std::exp(v);
    }
    g.front() = lo;
    if (points > 1) {
        g.back() = hi;
    }
    return g;
}

PhysicalParams preset_params(double mass_kg, double finesse) {
    PhysicalParams p;
    p.cavity_length = units::m_from_mm(1.0);
    p.laser_wavelength = units::m_from_nm(810.0);
    p.input_power = units::w_from_mw(50.0);
    p.mech_freq = units::angular_from_mhz(10.0);
    p.mech_damping = units::angular_from_hz(100.0);
    p.mass = mass_kg;
    p.temperature = units::k_from_mk(400.0);
    p.finesse = finesse;
    p.detuning = DetuningSpec::effective(p.mech_freq);
    return p;
}

std::vector<std::string_view> preset_names() {
    return {"fig1-5ng", "fig1-50ng", "fig2-5ng", "fig2-50ng"};
}

SweepSpec preset(std::string_view name) {
    const PhysicalParams light = preset_params(units::kg_from_ng(5.0), 1.07e4);
    const PhysicalParams heavy = preset_params(units::kg_from_ng(50.0), 3.4e4);

    SweepSpec spec;
    if (name == "fig1-5ng" || name == "fig1-50ng") {
        spec.base = name == "fig1-5ng" ? light : heavy;
        spec.axis = SweepAxis::DetuningOverWm;
        spec.grid = linear_grid(0.1, 3.0, 200);
        return spec;
    }
    if (name == "fig2-5ng") {
        spec.base = light;
    } else if (name == "fig2-50ng") {
        spec.base = heavy;
        spec.base.detuning = DetuningSpec::effective(0.5 * heavy.mech_freq);
    } else {
        throw ConfigError("unknown preset '" + std::string(name) +
                          "' (expected fig1-5ng, fig1-50ng, fig2-5ng or fig2-50ng)");
    }
    spec.axis = SweepAxis::TemperatureK;
    spec.grid = log_grid(0.1, 40.0, 100);
    return spec;
}

double bisect_boundary(const std::function<bool(double)>& holds, double lo, double hi,
                       double abs_tol) {
    while (std::abs(hi - lo) > abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (holds(mid) ? lo : hi) = mid;
    }
    return hi;
}

double find_threshold(const SweepSpec& spec, double lo, double hi) {
    validate(spec.base);
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo == hi) {
        throw BracketInvalid("threshold bracket must be two distinct finite values");
    }
    auto entangled = [&](double x) {
        const SweepRow row = evaluate_point(with_axis_value(spec.base, spec.axis, x), x);
        return row.stable && *row.log_neg >= kLogNegZeroFloor;
    };
    if (!entangled(lo)) {
        std::ostringstream os;
        os << "threshold bracket: no entanglement at lower end " << lo;
        throw BracketInvalid(os.str());
    }
    if (entangled(hi)) {
        std::ostringstream os;
        os << "threshold bracket: still entangled at upper end " << hi;
        throw BracketInvalid(os.str());
    }
    return bisect_boundary(entangled, lo, hi, std::abs(hi - lo) * 1e-4);
}

std::string csv_header() {
    return "axis,delta_over_wm,temperature_k,mass_kg,finesse,kappa_rad_s,G_rad_s,nbar,stable,"
           "eta_minus,log_neg,simon,branches";
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << csv_header() << '\n';
    for (const SweepRow& r : rows) {
        out << format_double(r.axis_value) << ',' << format_double(r.delta_over_wm) << ','
            << format_double(r.temperature_k) << ',' << format_double(r.mass_kg) << ','
            << format_double(r.finesse) << ',' << format_double(r.kappa) << ','
            << format_double(r.coupling) << ',' << format_double(r.nbar) << ','
            << format_bool(r.stable) << ',' << format_optional(r.eta_minus) << ','
            << format_optional(r.log_neg) << ',' << (r.simon ? format_bool(*r.simon) : "") << ','
            << r.branches << '\n';
    }
}

void write_cm_dump(std::ostream& out, const std::vector<SweepRow>& rows) {
    for (const SweepRow& r : rows) {
        for (int k = 0; k < 16; ++k) {
            if (k > 0) {
                out << ',';
            }
            if (r.cm) {
                out << format_double((*r.cm)(k / 4, k % 4));
            }
        }
        out << '\n';
    }
}

} // namespace optoent
