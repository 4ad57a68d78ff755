// test_stability.cpp — Routh-Hurwitz conditions against the spectral abscissa

#include "optoent/constants.hpp"
#include "optoent/model.hpp"
#include "optoent/stability.hpp"
#include "optoent/sweep.hpp"
#include "optoent/units.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace optoent;
using Catch::Matchers::WithinRel;

namespace {

struct Rates {
    double wm, gamma, kappa, delta, g;
};

DerivedModel model_from_rates(const Rates& r) {
    DerivedModel d;
    d.mech_freq = r.wm;
    d.mech_damping = r.gamma;
    d.constants.kappa = r.kappa;
    d.detuning = r.delta;
    d.coupling = r.g;
    d.drift = build_drift(d);
    d.diffusion = build_diffusion(d);
    return d;
}

// Rates of the light-mirror preset point.
Rates reference_rates() {
    const DerivedModel d = resolve_model(preset_params(units::kg_from_ng(5.0), 1.07e4)).model;
    return {d.mech_freq, d.mech_damping, d.kappa(), d.detuning, d.coupling};
}

} // namespace

TEST_CASE("zero coupling is always stable") {
    const RouthHurwitz rh = routh_hurwitz(1.0, 1e-3, 0.5, 0.7, 0.0);
    CHECK(rh.condition_1 > 0.0);
    CHECK(rh.condition_2 > 0.0);
    CHECK(rh.stable());
}

TEST_CASE("resonant drive reduces the conditions to positive constants") {
    const double wm = 2.0;
    const double gamma = 0.01;
    const double kappa = 0.3;
    const RouthHurwitz rh = routh_hurwitz(wm, gamma, kappa, 0.0, 1.7);
    const double inner = gamma * kappa + kappa * kappa + wm * wm;
    CHECK_THAT(rh.condition_2, WithinRel(wm * wm * kappa * kappa, 1e-14));
    CHECK_THAT(rh.condition_1, WithinRel(2.0 * gamma * kappa * inner * inner, 1e-14));
}

TEST_CASE("spectral abscissa examples") {
    CHECK(stability_eig(Mat4(-Mat4::Identity())) == -1.0);
    Mat4 a = Mat4::Zero();
    a.diagonal() << -1.0, -2.0, 0.5, -3.0;
    CHECK(std::abs(stability_eig(a) - 0.5) < 1e-15);
}

TEST_CASE("Routh-Hurwitz agrees with the eigenvalues on random draws") {
    const Rates base = reference_rates();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> decades(-2.0, 2.0);
    std::uniform_real_distribution<double> sign(-1.0, 1.0);
    int compared = 0;
    int unstable = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Rates r = base;
        r.gamma *= std::pow(10.0, decades(rng));
        r.kappa *= std::pow(10.0, decades(rng));
        r.delta *= std::pow(10.0, decades(rng)) * (sign(rng) < 0.0 ? -1.0 : 1.0);
        r.g *= std::pow(10.0, decades(rng));
        const DerivedModel d = model_from_rates(r);
        const StabilityReport s = analyze_stability(d);
        if (std::abs(s.eig_max_real) < s.margin) {
            continue;
        }
        ++compared;
        unstable += s.stable_eig ? 0 : 1;
        INFO("trial " << trial << " eig " << s.eig_max_real << " c1 " << s.rh_condition_1 << " c2 "
                      << s.rh_condition_2);
        CHECK(s.stable_rh == s.stable_eig);
    }
    CHECK(compared > 500);
    CHECK(unstable > 50);
    CHECK(unstable < compared - 50);
}

TEST_CASE("detuning sweep of the light-mirror preset: both paths agree") {
    const SweepSpec spec = preset("fig1-5ng");
    for (double x : spec.grid) {
        const DerivedModel d = resolve_model(with_axis_value(spec.base, spec.axis, x)).model;
        const StabilityReport s = analyze_stability(d);
        INFO("Delta/w_m = " << x);
        CHECK(s.agree);
    }
}

TEST_CASE("the coupling threshold from bisection matches condition 2") {
    const Rates base = reference_rates();
    auto stable_at = [&](double g) {
        Rates r = base;
        r.g = g;
        return stability_eig(model_from_rates(r).drift) < 0.0;
    };
    double lo = 0.0;
    double hi = base.g;
    while (stable_at(hi)) {
        hi *= 2.0;
    }
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        (stable_at(mid) ? lo : hi) = mid;
    }
    const double g_star = 0.5 * (lo + hi);
    const double expected =
        std::sqrt(base.wm * (base.delta * base.delta + base.kappa * base.kappa) / base.delta);
    CHECK_THAT(g_star, WithinRel(expected, 1e-6));
}

TEST_CASE("verdicts are invariant under time rescaling") {
    const Rates base = reference_rates();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> factor(0.5, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        Rates r = base;
        r.g *= factor(rng);
        r.delta *= factor(rng);
        const StabilityReport s1 = analyze_stability(model_from_rates(r));
        for (double c : {1e-3, 7.0, 1e4}) {
            const Rates q{r.wm * c, r.gamma * c, r.kappa * c, r.delta * c, r.g * c};
            const StabilityReport s2 = analyze_stability(model_from_rates(q));
            CHECK(s2.stable_rh == s1.stable_rh);
            CHECK(s2.stable_eig == s1.stable_eig);
        }
    }
}

TEST_CASE("failure reason names the violated condition") {
    Rates r = reference_rates();
    r.g *= 10.0;
    const StabilityReport s = analyze_stability(model_from_rates(r));
    REQUIRE_FALSE(s.stable());
    CHECK(s.failure_reason().find("condition 2") != std::string::npos);
}
