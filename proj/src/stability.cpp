// stability.cpp — closed-form and spectral stability checks

#include "optoent/stability.hpp"

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"

#include <sstream>
#include <stdexcept>

namespace optoent {

RouthHurwitz routh_hurwitz(double wm, double gamma, double kappa, double delta,
                           double coupling) noexcept {
    const double d2 = delta * delta;
    const double k2 = kappa * kappa;
    const double g2 = coupling * coupling;
    const double inner = gamma * kappa + k2 + wm * wm;
    const double bracket =
        d2 * d2 + d2 * (gamma * gamma + 2.0 * gamma * kappa + 2.0 * k2 - 2.0 * wm * wm) + inner * inner;
    const double gk = gamma + 2.0 * kappa;

    RouthHurwitz rh;
    rh.condition_1 = 2.0 * gamma * kappa * bracket + wm * g2 * delta * gk * gk;
    rh.condition_2 = wm * wm * (d2 + k2) - wm * g2 * delta;
    return rh;
}

std::string StabilityReport::failure_reason() const {
    std::ostringstream os;
    if (!stable_rh) {
        if (rh_condition_1 <= 0.0) {
            os << "Routh-Hurwitz condition 1 violated (value " << rh_condition_1 << ")";
        }
        if (rh_condition_2 <= 0.0) {
            if (os.tellp() > 0) {
                os << "; ";
            }
            os << "Routh-Hurwitz condition 2 violated (value " << rh_condition_2 << ")";
        }
    }
    if (!stable_eig) {
        if (os.tellp() > 0) {
            os << "; ";
        }
        os << "max eigenvalue real part " << eig_max_real << " >= -" << margin;
    }
    return os.str();
}

StabilityReport stability_rh(const DerivedModel& d) {
    const RouthHurwitz rh =
        routh_hurwitz(d.mech_freq, d.mech_damping, d.kappa(), d.detuning, d.coupling);
    StabilityReport r;
    r.rh_condition_1 = rh.condition_1;
    r.rh_condition_2 = rh.condition_2;
    r.stable_rh = rh.stable();
    return r;
}

double stability_eig(const Mat4& a) {
    try {
        return spectral_abscissa(a);
    } catch (const std::runtime_error& e) {
        throw NumericalFailure(e.what());
    }
}

StabilityReport analyze_stability(const DerivedModel& d) {
    StabilityReport r = stability_rh(d);
    r.eig_max_real = stability_eig(d.drift);
    r.margin = stability_margin(d.mech_freq, d.kappa());
    r.stable_eig = r.eig_max_real < -r.margin;
    r.agree = r.stable_eig == r.stable_rh;
    return r;
}

} // namespace optoent
