// model.cpp — derived constants, cubic steady state, drift and diffusion

#include "optoent/model.hpp"

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"
#include "optoent/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace optoent {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw ConfigError(std::string("invalid parameters: ") + what);
    }
}

DerivedModel assemble(const PhysicalParams& p, const ModelConstants& c, double alpha_s,
                      double detuning) {
    DerivedModel d;
    d.constants = c;
    d.mech_freq = p.mech_freq;
    d.mech_damping = p.mech_damping;
    d.alpha_s = alpha_s;
    d.detuning = detuning;
    d.displacement = c.bare_coupling * alpha_s * alpha_s / p.mech_freq;
    d.coupling = c.bare_coupling * alpha_s * std::sqrt(2.0);
    d.drift = build_drift(d);
    d.diffusion = build_diffusion(d);
    return d;
}

// Root of a function that is monotone on [lo, hi] with a sign change.
template <typename F>
double bisect_root(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fmid = f(mid);
        if (fmid == 0.0) {
            return mid;
        }
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string_view to_string(KappaConvention c) noexcept {
    return c == KappaConvention::FullWidth ? "full_width" : "half_width";
}

KappaConvention parse_kappa_convention(std::string_view s) {
    if (s == "full_width") {
        return KappaConvention::FullWidth;
    }
    if (s == "half_width") {
        return KappaConvention::HalfWidth;
    }
    throw ConfigError("kappa_convention must be full_width or half_width, got '" +
                      std::string(s) + "'");
}

double PhysicalParams::quality_factor() const noexcept {
    return mech_damping > 0.0 ? mech_freq / mech_damping
                              : std::numeric_limits<double>::infinity();
}

void validate(const PhysicalParams& p) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
    require(positive(p.cavity_length), "cavity length must be > 0");
    require(positive(p.laser_wavelength), "laser wavelength must be > 0");
    require(non_negative(p.input_power), "input power must be >= 0");
    require(positive(p.mech_freq), "mechanical frequency must be > 0");
    require(non_negative(p.mech_damping), "mechanical damping must be >= 0");
    require(positive(p.mass), "mass must be > 0");
    require(non_negative(p.temperature), "temperature must be >= 0");
    require(positive(p.finesse), "finesse must be > 0");
    require(std::isfinite(p.detuning.value), "detuning must be finite");
    require(p.quality_factor() > 10.0, "mechanical quality factor must exceed 10");
}

double cavity_decay_rate(double finesse, double length, KappaConvention convention) {
    const double full = constants::pi * constants::speed_of_light / (finesse * length);
    return convention == KappaConvention::FullWidth ? full : 0.5 * full;
}

double thermal_occupation(double mech_freq, double temperature) {
    if (temperature <= 0.0) {
        return 0.0;
    }
    const double x = constants::hbar * mech_freq / (constants::k_boltzmann * temperature);
    if (x > kMaxBoltzmannExponent) {
        return 0.0;
    }
    return 1.0 / std::expm1(x);
}

ModelConstants derive_constants_for_bare(const PhysicalParams& p, double bare_detuning) {
    validate(p);
    ModelConstants c;
    c.kappa = cavity_decay_rate(p.finesse, p.cavity_length, p.kappa_convention);
    c.laser_freq = 2.0 * constants::pi * constants::speed_of_light / p.laser_wavelength;
    c.bare_detuning = bare_detuning;
    c.cavity_freq = c.laser_freq + bare_detuning;
    c.bare_coupling = (c.cavity_freq / p.cavity_length) *
                      std::sqrt(constants::hbar / (p.mass * p.mech_freq));
    c.drive = std::sqrt(2.0 * p.input_power * c.kappa / (constants::hbar * c.laser_freq));
    c.nbar = thermal_occupation(p.mech_freq, p.temperature);
    return c;
}

ModelConstants derive_constants(const PhysicalParams& p) {
    if (p.detuning.kind == DetuningSpec::Kind::Bare) {
        return derive_constants_for_bare(p, p.detuning.value);
    }
    return steady_state_from_detuning(p, p.detuning.value).constants;
}

std::vector<SteadyStateBranch> solve_steady_state(const PhysicalParams& p, double bare_detuning) {
    const ModelConstants c = derive_constants_for_bare(p, bare_detuning);
    const double shift = c.bare_coupling * c.bare_coupling / p.mech_freq; // Delta0 - Delta per unit x
    const double e2 = c.drive * c.drive;

    std::vector<double> roots;
    if (e2 == 0.0) {
        roots.push_back(0.0);
    } else if (shift == 0.0) {
        roots.push_back(e2 / (c.kappa * c.kappa + bare_detuning * bare_detuning));
    } else {
        // y = shift*x/kappa, delta = Delta0/kappa:  y (1 + (delta - y)^2) = load
        const double delta = bare_detuning / c.kappa;
        const double load = shift * e2 / (c.kappa * c.kappa * c.kappa);
        auto f = [&](double y) { return y * (1.0 + (delta - y) * (delta - y)) - load; };

        // f(0) = -load < 0 and f(load) >= 0; f is monotone between its critical
        // points, which exist only for delta^2 > 3.
        std::vector<double> knots{0.0};
        if (delta * delta > 3.0) {
            const double root = std::sqrt(delta * delta - 3.0);
            for (double y : {(2.0 * delta - root) / 3.0, (2.0 * delta + root) / 3.0}) {
                if (y > 0.0 && y < load) {
                    knots.push_back(y);
                }
            }
        }
        knots.push_back(load);
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double lo = knots[i];
            const double hi = knots[i + 1];
            if ((f(lo) < 0.0) != (f(hi) < 0.0)) {
                roots.push_back(bisect_root(f, lo, hi) * c.kappa / shift);
            }
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end(),
                                [](double a, double b) {
                                    return std::abs(a - b) <= 1e-12 * std::max(a, b);
                                }),
                    roots.end());
    }

    std::vector<SteadyStateBranch> branches;
    branches.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const DerivedModel m = assemble(p, c, std::sqrt(roots[i]), bare_detuning - shift * roots[i]);
        SteadyStateBranch b;
        b.intensity = roots[i];
        b.detuning = m.detuning;
        b.stable = analyze_stability(m).stable();
        b.branch_index = i;
        branches.push_back(b);
    }
    return branches;
}

DerivedModel steady_state_from_detuning(const PhysicalParams& p, double detuning) {
    validate(p);
    // G0 depends on w_c = w0 + Delta0 and Delta0 depends on G0; the relative
    // correction is ~1e-7, so a few fixed-point passes are exact.
    double bare = detuning;
    ModelConstants c;
    double intensity = 0.0;
    for (int it = 0; it < 16; ++it) {
        c = derive_constants_for_bare(p, bare);
        intensity = c.drive * c.drive / (c.kappa * c.kappa + detuning * detuning);
        const double next = detuning + c.bare_coupling * c.bare_coupling * intensity / p.mech_freq;
        if (next == bare) {
            break;
        }
        bare = next;
    }
    c = derive_constants_for_bare(p, bare);
    intensity = c.drive * c.drive / (c.kappa * c.kappa + detuning * detuning);
    return assemble(p, c, std::sqrt(intensity), detuning);
}

DerivedModel model_on_branch(const PhysicalParams& p, double bare_detuning, double intensity) {
    const ModelConstants c = derive_constants_for_bare(p, bare_detuning);
    const double shift = c.bare_coupling * c.bare_coupling / p.mech_freq;
    return assemble(p, c, std::sqrt(intensity), bare_detuning - shift * intensity);
}

Mat4 build_drift(const DerivedModel& d) {
    const double wm = d.mech_freq;
    const double g = d.coupling;
    const double k = d.constants.kappa;
    const double delta = d.detuning;
    Mat4 a;
    // clang-format off
    a <<  0.0,  wm,            0.0,   0.0,
         -wm,  -d.mech_damping, g,     0.0,
          0.0,  0.0,           -k,     delta,
          g,    0.0,           -delta, -k;
    // clang-format on
    return a;
}

Mat4 build_diffusion(const DerivedModel& d) {
    Mat4 m = Mat4::Zero();
    m(1, 1) = d.mech_damping * (2.0 * d.constants.nbar + 1.0);
    m(2, 2) = d.constants.kappa;
    m(3, 3) = d.constants.kappa;
    return m;
}

ResolvedModel resolve_model(const PhysicalParams& p) {
    ResolvedModel r;
    if (p.detuning.kind == DetuningSpec::Kind::Effective) {
        r.model = steady_state_from_detuning(p, p.detuning.value);
        r.branch_count = solve_steady_state(p, r.model.constants.bare_detuning).size();
        return r;
    }
    const auto branches = solve_steady_state(p, p.detuning.value);
    auto chosen = std::find_if(branches.begin(), branches.end(),
                               [](const SteadyStateBranch& b) { return b.stable; });
    if (chosen == branches.end()) {
        chosen = branches.begin();
    }
    r.model = model_on_branch(p, p.detuning.value, chosen->intensity);
    r.branch_count = branches.size();
    return r;
}

} // namespace optoent
