// acceptance.cpp — end-to-end acceptance checks, one PASS/FAIL line per criterion

#include "optoent/entanglement.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/readout.hpp"
#include "optoent/stability.hpp"
#include "optoent/sweep.hpp"
#include "optoent/units.hpp"

#include "support/random_states.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace optoent;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool entangled(const SweepRow& row) {
    return row.stable && row.log_neg && *row.log_neg > 0.0;
}

SweepSpec with_quality(SweepSpec spec, double q) {
    spec.base.mech_damping = spec.base.mech_freq / q;
    return spec;
}

Outcome detuning_interval() {
    const auto start = std::chrono::steady_clock::now();
    const SweepSpec spec = preset("fig1-5ng");
    const auto rows = run_sweep(spec);
    int runs = 0;
    bool contains_one = false;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool in = entangled(rows[i]);
        if (in && (i == 0 || !entangled(rows[i - 1]))) {
            ++runs;
            lo = rows[i].axis_value;
        }
        if (in) {
            hi = rows[i].axis_value;
        }
    }
    // Interval containing Delta/w_m = 1 bounded by the grid points on either side.
    const SweepRow at_one = evaluate_point(with_axis_value(spec.base, spec.axis, 1.0), 1.0);
    contains_one = entangled(at_one);
    const SweepRow& first = rows.front();
    const SweepRow& last = rows.back();
    const double en_first = first.log_neg.value_or(0.0);
    const double en_last = last.log_neg.value_or(0.0);
    const double elapsed = seconds_since(start);

    std::ostringstream os;
    os << "entangled runs=" << runs << " span=[" << lo << ", " << hi << "] E_N(1.0)="
       << at_one.log_neg.value_or(0.0) << " E_N(0.1)=" << en_first << " E_N(3.0)=" << en_last
       << " time=" << elapsed << "s";
    return {runs == 1 && contains_one && en_first == 0.0 && en_last == 0.0 && elapsed < 10.0, os.str()};
}

double peak_log_neg(const std::string& name) {
    double peak = 0.0;
    for (const SweepRow& r : run_sweep(preset(name))) {
        if (r.stable) {
            peak = std::max(peak, *r.log_neg);
        }
    }
    return peak;
}

Outcome mass_ordering() {
    const double light = peak_log_neg("fig1-5ng");
    const double heavy = peak_log_neg("fig1-50ng");
    std::ostringstream os;
    os << "peak E_N 50 ng=" << heavy << " 5 ng=" << light;
    return {heavy < light, os.str()};
}

Outcome temperature_robustness() {
    const auto start = std::chrono::steady_clock::now();
    const SweepSpec spec = preset("fig2-5ng");
    const SweepRow at20 = evaluate_point(with_axis_value(spec.base, spec.axis, 20.0), 20.0);
    const double t = find_threshold(spec, 0.1, 40.0);
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "Q=" << spec.base.quality_factor() << " E_N(20 K)=" << at20.log_neg.value_or(0.0)
       << " threshold=" << t << " K time=" << elapsed << "s";
    return {entangled(at20) && t > 20.0 && elapsed < 10.0, os.str()};
}

Outcome q1e4_thresholds() {
    const double light = find_threshold(with_quality(preset("fig2-5ng"), 1e4), 0.1, 40.0);
    const double heavy = find_threshold(with_quality(preset("fig2-50ng"), 1e4), 0.1, 40.0);
    std::ostringstream os;
    os << "5 ng threshold=" << light << " K (want [2, 4]); 50 ng threshold=" << heavy
       << " K (want [0.5, 1.5])";
    return {light >= 2.0 && light <= 4.0 && heavy >= 0.5 && heavy <= 1.5, os.str()};
}

double rel_frobenius(const Mat4& a, const Mat4& b) {
    return (a - b).norm() / b.norm();
}

Outcome lyapunov_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const DerivedModel fig = resolve_model(preset("fig1-5ng").base).model;
    double worst = rel_frobenius(solve_lyapunov(fig).matrix(),
                                 integrate_cm_oracle(fig.drift, fig.diffusion).matrix());
    std::mt19937_64 rng(5);
    int generic = 0;
    int structured = 0;
    while (generic < 25) {
        const auto sys = testsupport::random_stable_system(rng, std::pow(10.0, generic % 9 - 4));
        worst = std::max(worst, rel_frobenius(solve_lyapunov(sys.a, sys.d).matrix(),
                                              integrate_cm_oracle(sys.a, sys.d).matrix()));
        ++generic;
    }
    std::uniform_real_distribution<double> factor(0.5, 2.0);
    while (structured < 25) {
        DerivedModel d = fig;
        d.constants.kappa *= factor(rng);
        d.detuning *= factor(rng);
        d.coupling *= factor(rng);
        d.drift = build_drift(d);
        d.diffusion = build_diffusion(d);
        const double abscissa = spectral_abscissa(d.drift);
        if (!(abscissa < -1e-3 * d.drift.cwiseAbs().maxCoeff())) {
            continue;
        }
        worst = std::max(worst, rel_frobenius(solve_lyapunov(d).matrix(),
                                              integrate_cm_oracle(d.drift, d.diffusion).matrix()));
        ++structured;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "systems=" << 1 + generic + structured << " worst relative difference=" << worst
       << " time=" << elapsed << "s";
    return {worst < 1e-6 && elapsed < 60.0, os.str()};
}

Outcome entanglement_paths() {
    std::mt19937_64 rng(6);
    double worst = 0.0;
    int simon_mismatch = 0;
    int entangled_count = 0;
    for (int i = 0; i < 1000; ++i) {
        const CovarianceMatrix v(testsupport::random_physical_cm(rng));
        const EntanglementReport e = analyze_entanglement(v);
        worst = std::max(worst, std::abs(e.eta_minus - e.eta_minus_spectral) / e.eta_minus);
        const double gap = (e.sigma - 0.25) - 4.0 * e.det_v;
        if (std::abs(gap) > kSimonBoundaryBand && e.simon_entangled != (e.log_neg > 0.0)) {
            ++simon_mismatch;
        }
        entangled_count += e.simon_entangled ? 1 : 0;
    }
    std::ostringstream os;
    os << "states=1000 entangled=" << entangled_count << " worst relative eta gap=" << worst
       << " Simon mismatches=" << simon_mismatch;
    return {worst < 1e-8 && simon_mismatch == 0, os.str()};
}

Outcome stability_paths() {
    const DerivedModel fig = resolve_model(preset("fig1-5ng").base).model;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> decades(-2.0, 2.0);
    int compared = 0;
    int disagree = 0;
    int unstable = 0;
    for (int i = 0; i < 1000; ++i) {
        DerivedModel d = fig;
        d.mech_freq *= std::pow(10.0, decades(rng));
        d.mech_damping *= std::pow(10.0, decades(rng));
        d.constants.kappa *= std::pow(10.0, decades(rng));
        d.detuning *= std::pow(10.0, decades(rng));
        d.coupling *= std::pow(10.0, decades(rng));
        d.drift = build_drift(d);
        d.diffusion = build_diffusion(d);
        const StabilityReport s = analyze_stability(d);
        if (std::abs(s.eig_max_real) < s.margin) {
            continue;
        }
        ++compared;
        disagree += s.agree ? 0 : 1;
        unstable += s.stable_eig ? 0 : 1;
    }
    std::ostringstream os;
    os << "draws=1000 compared=" << compared << " unstable=" << unstable << " disagreements=" << disagree;
    return {disagree == 0 && compared > 0, os.str()};
}

Outcome thermal_limit() {
    PhysicalParams p = preset("fig1-5ng").base;
    p.input_power = 0.0;
    const DerivedModel d = resolve_model(p).model;
    const CovarianceMatrix v = solve_lyapunov(d);
    Mat4 expected = Mat4::Zero();
    const double n = d.nbar();
    expected.diagonal() << n + 0.5, n + 0.5, 0.5, 0.5;
    const double err = (v.matrix() - expected).cwiseAbs().maxCoeff();
    const double en = log_negativity(v);
    std::ostringstream os;
    os << "G=" << d.coupling << " nbar=" << n << " max |V - diag|=" << err << " E_N=" << en;
    return {d.coupling == 0.0 && err < 1e-10 && en == 0.0, os.str()};
}

Outcome trajectory_closure() {
    const auto start = std::chrono::steady_clock::now();
    const PhysicalParams p = preset("fig1-5ng").base;
    const DerivedModel d = resolve_model(p).model;
    const ReadoutParams r = default_readout(p, d);
    const ExtendedModel m = build_extended(d, r, false);
    const TrajectoryConfig c = default_trajectory_config(d, r, m);
    validate(c, d, r, m);
    const CMEstimate est = simulate_trajectories(m, c);
    const Mat4 exact = solve_lyapunov(d).matrix();

    double worst_z = 0.0;
    double worst_rel_err = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            worst_z = std::max(worst_z, std::abs(est.mean(i, j) - exact(i, j)) / est.std_error(i, j));
            worst_rel_err = std::max(worst_rel_err, est.std_error(i, j) / std::sqrt(exact(i, i) * exact(j, j)));
        }
    }
    const ReconstructedEntanglement rec = reconstruct_entanglement(est);
    const double en_exact = log_negativity(CovarianceMatrix(exact));
    const double en_z = std::abs(rec.report.log_neg - en_exact) / rec.log_neg_sigma;
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "trajectories=" << c.n_traj << " worst |dV|/stderr=" << worst_z
       << " worst stderr/sqrt(Vii Vjj)=" << worst_rel_err << " E_N=" << rec.report.log_neg << "+-"
       << rec.log_neg_sigma << " analytic=" << en_exact << " time=" << elapsed << "s";
    return {worst_z < 3.0 && worst_rel_err < 0.02 && en_z < 3.0 && elapsed < 600.0, os.str()};
}

Outcome back_action_bound() {
    const PhysicalParams p = preset("fig1-5ng").base;
    const DerivedModel d = resolve_model(p).model;
    const ReadoutParams base = default_readout(p, d);
    const ReadoutParams weak = make_readout(p, d, base.kappa2, base.detuning2, 0.01 * d.alpha_s,
                                            base.length2, base.cavity_freq2);
    const Mat6 v6 = solve_extended(build_extended(d, weak, true));
    const double en6 = log_negativity(CovarianceMatrix(Mat4(v6.topLeftCorner<4, 4>())));
    const double en4 = log_negativity(solve_lyapunov(d));
    std::ostringstream os;
    os << "alpha2/alpha_s=" << weak.alpha2 / d.alpha_s << " E_N(6x6)=" << en6 << " E_N(4x4)=" << en4
       << " difference=" << std::abs(en6 - en4);
    return {std::abs(en6 - en4) < 1e-3, os.str()};
}

Outcome physicality_sweep() {
    int stable_points = 0;
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::string_view name : preset_names()) {
        SweepSpec spec = preset(name);
        spec.dump_cm = true;
        for (const SweepRow& r : run_sweep(spec)) {
            if (!r.stable) {
                continue;
            }
            ++stable_points;
            const double nu = symplectic_eigenvalues(*r.cm)[0];
            worst = std::min(worst, nu);
            violations += nu >= 0.5 - 1e-9 ? 0 : 1;
        }
    }
    std::ostringstream os;
    os << "stable points=" << stable_points << " smallest symplectic eigenvalue=" << worst
       << " violations=" << violations;
    return {violations == 0 && stable_points > 0, os.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"detuning preset: single entanglement interval around Delta = w_m (5 ng)", detuning_interval},
        {"detuning presets: peak ordering, 50 ng below 5 ng", mass_ordering},
        {"temperature preset: entanglement persists above 20 K (5 ng, Q = 1e5)", temperature_robustness},
        {"Q = 1e4 temperature thresholds", q1e4_thresholds},
        {"Lyapunov solve matches the quadrature oracle", lyapunov_oracle},
        {"closed-form and spectral eta^- agree; Simon test consistent", entanglement_paths},
        {"Routh-Hurwitz and eigenvalue stability agree", stability_paths},
        {"uncoupled thermal limit", thermal_limit},
        {"trajectory experiment reconstructs the covariance", trajectory_closure},
        {"readout back-action bound", back_action_bound},
        {"physicality over all preset sweeps", physicality_sweep},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " | "
                  << criteria[i].first << " | " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
