// readout.cpp — extended model, exact OU discretization, trajectory ensembles

#include "optoent/readout.hpp"

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"
#include "optoent/parallel.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace optoent {

namespace {

constexpr double kRelTol = 1e-12;

std::string ratio_text(const char* what, double value) {
    std::ostringstream os;
    os << what << " = " << value;
    return os.str();
}

// Exact transition over one step h of du = A u dt + dW, <dW dW^T> = D dt:
// u(t+h) = Phi u(t) + L z with L L^T = int_0^h e^{As} D e^{A^T s} ds, both
// read off the block exponential of [[-A, D], [0, A^T]] h.
template <int N>
struct Transition {
    Mat<N> phi;
    Mat<N> noise;
};

template <int N>
Mat<N> psd_sqrt(const Mat<N>& q) {
    Eigen::SelfAdjointEigenSolver<Mat<N>> eig(symmetrized(q));
    if (eig.info() != Eigen::Success) {
        throw NumericalFailure("noise covariance factorization failed");
    }
    const Vec<N> root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal();
}

template <int N>
Transition<N> exact_transition(const Mat<N>& a, const Mat<N>& d, double h) {
    Mat<2 * N> block = Mat<2 * N>::Zero();
    block.template topLeftCorner<N, N>() = -a * h;
    block.template topRightCorner<N, N>() = d * h;
    block.template bottomRightCorner<N, N>() = a.transpose() * h;
    const Mat<2 * N> e = expm<2 * N>(block);
    Transition<N> t;
    t.phi = e.template bottomRightCorner<N, N>().transpose();
    t.noise = psd_sqrt<N>(t.phi * e.template topRightCorner<N, N>());
    return t;
}

template <int N>
Vec<N> draw_normal(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
    Vec<N> z;
    for (int i = 0; i < N; ++i) {
        z[i] = normal(rng);
    }
    return z;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::size_t step_count(double duration, double dt) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

struct MeanAndError {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanAndError mean_and_error(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

} // namespace

double ReadoutParams::readout_rate() const noexcept {
    return coupling2 * alpha2 / std::sqrt(2.0);
}

ReadoutParams make_readout(const PhysicalParams& p, const DerivedModel& d, double kappa2,
                           double detuning2, double alpha2, double length2, double cavity_freq2) {
    if (!(kappa2 > 0.0) || !std::isfinite(kappa2)) {
        throw ConfigError("readout: kappa2 must be > 0");
    }
    if (!(alpha2 >= 0.0) || !std::isfinite(alpha2)) {
        throw ConfigError("readout: alpha2 must be >= 0");
    }
    if (!(length2 > 0.0) || !(cavity_freq2 > 0.0)) {
        throw ConfigError("readout: cavity length and frequency must be > 0");
    }
    if (!std::isfinite(detuning2)) {
        throw ConfigError("readout: detuning must be finite");
    }

    ReadoutParams r;
    r.kappa2 = kappa2;
    r.detuning2 = detuning2;
    r.alpha2 = alpha2;
    r.length2 = length2;
    r.cavity_freq2 = cavity_freq2;
    r.coupling2 = (cavity_freq2 / length2) * std::sqrt(constants::hbar / (p.mass * p.mech_freq));

    const double wm = d.mech_freq;
    r.rwa_ok = std::abs(detuning2 - wm) <= 1e-9 * wm;
    if (!r.rwa_ok) {
        r.regime_failures.push_back(ratio_text("rotating wave requires Delta2 = w_m; Delta2/w_m",
                                               detuning2 / wm));
    }
    const double band_ratio = wm / kappa2;
    const double rate = r.readout_rate();
    const bool fast_mirror = band_ratio >= kRegimeRatio * (1.0 - kRelTol);
    const bool slow_coupling = rate == 0.0 || kappa2 / rate >= kRegimeRatio * (1.0 - kRelTol);
    if (!fast_mirror) {
        r.regime_failures.push_back(ratio_text("adiabatic regime requires w_m/kappa2 >= 10; w_m/kappa2",
                                               band_ratio));
    }
    if (!slow_coupling) {
        r.regime_failures.push_back(ratio_text(
            "adiabatic regime requires kappa2/(G2 alpha2/sqrt2) >= 10; kappa2/(G2 alpha2/sqrt2)",
            kappa2 / rate));
    }
    r.adiabatic_ok = fast_mirror && slow_coupling;
    r.back_action_negligible = alpha2 <= kBackActionRatio * std::abs(d.alpha_s) * (1.0 + kRelTol);
    return r;
}

double alpha2_for_rate(const ReadoutParams& r, double rate) {
    return std::sqrt(2.0) * rate / r.coupling2;
}

ReadoutParams default_readout(const PhysicalParams& p, const DerivedModel& d) {
    const double kappa2 = d.mech_freq / 20.0;
    ReadoutParams r = make_readout(p, d, kappa2, d.mech_freq, 0.0, p.cavity_length,
                                   d.constants.cavity_freq);
    return make_readout(p, d, kappa2, d.mech_freq, alpha2_for_rate(r, kappa2 / 20.0),
                        p.cavity_length, d.constants.cavity_freq);
}

ExtendedModel build_extended(const DerivedModel& d, const ReadoutParams& r, bool back_action) {
    const double g2 = r.coupling2 * r.alpha2 * std::sqrt(2.0);
    ExtendedModel m;
    m.drift.topLeftCorner<4, 4>() = d.drift;
    m.drift(4, 4) = -r.kappa2;
    m.drift(4, 5) = r.detuning2;
    m.drift(5, 4) = -r.detuning2;
    m.drift(5, 5) = -r.kappa2;
    m.drift(5, 0) = g2;
    if (back_action) {
        m.drift(1, 4) = g2;
    }
    m.diffusion.topLeftCorner<4, 4>() = d.diffusion;
    m.diffusion(4, 4) = r.kappa2;
    m.diffusion(5, 5) = r.kappa2;
    return m;
}

Mat6 solve_extended(const ExtendedModel& m) {
    return solve_lyapunov_dense<6>(m.drift, m.diffusion, default_margin<6>(m.drift));
}

double adiabatic_output_gain(const ReadoutParams& r) {
    if (!r.rwa_ok || !r.adiabatic_ok) {
        std::string msg = "readout regime violated:";
        for (const std::string& f : r.regime_failures) {
            msg += " [" + f + "]";
        }
        throw RegimeViolation(msg);
    }
    return r.coupling2 * r.alpha2 / std::sqrt(r.kappa2);
}

double predicted_output_variance(double gain, double mirror_var, double window) {
    return gain * gain * window * mirror_var + 0.5;
}

double relaxation_rate(const ExtendedModel& m) {
    return 2.0 * std::abs(spectral_abscissa(m.drift));
}

namespace {

double fastest_rate(const DerivedModel& d, const ReadoutParams& r) {
    return std::max({d.mech_freq, d.kappa(), r.kappa2, std::abs(d.detuning)});
}

} // namespace

TrajectoryConfig default_trajectory_config(const DerivedModel& d, const ReadoutParams& r,
                                           const ExtendedModel& m) {
    const double relax = relaxation_rate(m);
    TrajectoryConfig c;
    c.dt = 0.01 / fastest_rate(d, r);
    c.burn_in = 20.0 / relax;
    c.sample_time = 1000.0 / relax;
    c.n_traj = 32;
    c.seed = kDefaultSeed;
    return c;
}

void validate(const TrajectoryConfig& c, const DerivedModel& d, const ReadoutParams& r,
              const ExtendedModel& m) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) {
        throw ConfigError("trajectory step dt must be > 0");
    }
    const double dt_max = 0.01 / fastest_rate(d, r);
    if (c.dt > dt_max * (1.0 + kRelTol)) {
        std::ostringstream os;
        os << "trajectory step dt = " << c.dt << " s exceeds 0.01/max(w_m, kappa, kappa2, |Delta|) = "
           << dt_max << " s";
        throw StepTooLarge(os.str());
    }
    const double stiff = spectral_radius(m.drift) * c.dt;
    if (stiff > 0.1) {
        std::ostringstream os;
        os << "trajectory step dt = " << c.dt << " s gives max |lambda| dt = " << stiff << " > 0.1";
        throw StepTooLarge(os.str());
    }
    if (!(c.burn_in >= 0.0) || !std::isfinite(c.burn_in)) {
        throw ConfigError("burn-in time must be >= 0");
    }
    const double min_sample = 50.0 / relaxation_rate(m);
    if (!(c.sample_time >= min_sample * (1.0 - kRelTol)) || !std::isfinite(c.sample_time)) {
        std::ostringstream os;
        os << "sample time " << c.sample_time << " s is below 50 relaxation times (" << min_sample
           << " s)";
        throw ConfigError(os.str());
    }
    if (c.n_traj < 2) {
        throw ConfigError("at least two trajectories are required for a standard error");
    }
    if (c.noise_substeps < 1) {
        throw ConfigError("noise_substeps must be >= 1");
    }
}

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index));
}

CMEstimate simulate_trajectories(const ExtendedModel& m, const TrajectoryConfig& c) {
    if (!(c.dt > 0.0) || c.n_traj == 0 || c.noise_substeps == 0) {
        throw ConfigError("simulate_trajectories: dt, n_traj and noise_substeps must be positive");
    }
    const double abscissa = spectral_abscissa(m.drift);
    if (!(abscissa < -default_margin<6>(m.drift))) {
        std::ostringstream os;
        os << "extended drift matrix not stable (max Re lambda = " << abscissa << ")";
        throw UnstableSystem(os.str());
    }

    const unsigned k = c.noise_substeps;
    const double h = c.dt / static_cast<double>(k);
    const Transition<6> exact = exact_transition<6>(m.drift, m.diffusion, h);
    const Mat6 em_noise = (m.diffusion.diagonal().cwiseMax(0.0) * h).cwiseSqrt().asDiagonal();
    const Mat6 em_step = Mat6::Identity() + m.drift * c.dt;
    const Mat6 stationary_root =
        c.initial == InitialState::Stationary ? psd_sqrt<6>(solve_extended(m)) : Mat6::Zero();

    const std::size_t burn_steps = step_count(c.burn_in, c.dt);
    const std::size_t sample_steps = std::max<std::size_t>(1, step_count(c.sample_time, c.dt));

    std::vector<Mat4> per_traj(c.n_traj);
    parallel_for(c.n_traj, c.jobs, [&](std::size_t idx) {
        std::mt19937_64 rng(trajectory_seed(c.seed, idx));
        std::normal_distribution<double> normal;
        Vec<6> u = Vec<6>::Zero();
        if (c.initial == InitialState::Stationary) {
            u = stationary_root * draw_normal<6>(rng, normal);
        }

        auto advance = [&] {
            if (c.integrator == Integrator::Exact) {
                for (unsigned j = 0; j < k; ++j) {
                    u = exact.phi * u + exact.noise * draw_normal<6>(rng, normal);
                }
            } else {
                Vec<6> dw = Vec<6>::Zero();
                for (unsigned j = 0; j < k; ++j) {
                    dw += em_noise * draw_normal<6>(rng, normal);
                }
                u = em_step * u + dw;
            }
        };

        for (std::size_t s = 0; s < burn_steps; ++s) {
            advance();
        }
        Mat4 acc = Mat4::Zero();
        for (std::size_t s = 0; s < sample_steps; ++s) {
            advance();
            const Vec<4> x = u.head<4>();
            acc.noalias() += x * x.transpose();
        }
        per_traj[idx] = acc / static_cast<double>(sample_steps);
    });

    CMEstimate est;
    est.n_traj = c.n_traj;
    est.samples_per_traj = sample_steps;
    std::vector<double> xs(c.n_traj);
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            for (std::size_t t = 0; t < c.n_traj; ++t) {
                xs[t] = 0.5 * (per_traj[t](i, j) + per_traj[t](j, i));
            }
            const MeanAndError me = mean_and_error(xs);
            est.mean(i, j) = est.mean(j, i) = me.mean;
            est.std_error(i, j) = est.std_error(j, i) = me.std_error;
        }
    }
    return est;
}

ReconstructedEntanglement reconstruct_entanglement(const CMEstimate& est, std::uint64_t seed) {
    ReconstructedEntanglement out;
    const CovarianceMatrix v(est.mean);
    out.min_symplectic_eigenvalue = symplectic_eigenvalues(v.matrix())[0];

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> log_negs(kResamples);
    std::vector<double> etas(kResamples);
    std::vector<double> nus(kResamples);
    for (std::size_t s = 0; s < kResamples; ++s) {
        Mat4 sample = est.mean;
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                const double dv = est.std_error(i, j) * normal(rng);
                sample(i, j) += dv;
                if (i != j) {
                    sample(j, i) += dv;
                }
            }
        }
        const CovarianceMatrix cm(sample);
        etas[s] = eta_minus_spectral(cm);
        log_negs[s] = log_negativity_from_eta(etas[s]);
        nus[s] = symplectic_eigenvalues(cm.matrix())[0];
    }
    auto spread = [](const std::vector<double>& xs) {
        return mean_and_error(xs).std_error * std::sqrt(static_cast<double>(xs.size()));
    };
    out.log_neg_sigma = spread(log_negs);
    out.eta_minus_sigma = spread(etas);

    const double deficit = 0.5 - out.min_symplectic_eigenvalue;
    if (deficit > 3.0 * spread(nus) + 1e-9) {
        std::ostringstream os;
        os << "reconstructed covariance is unphysical: smallest symplectic eigenvalue "
           << out.min_symplectic_eigenvalue << " is more than 3 sigma below 1/2";
        throw UnphysicalState(os.str());
    }
    out.report = analyze_entanglement(v);
    return out;
}

OutputWindowEstimate simulate_output_windows(const ExtendedModel& m, const ReadoutParams& r,
                                             const OutputWindowConfig& c) {
    if (!(c.dt > 0.0) || !(c.window >= c.dt) || c.n_traj < 2) {
        throw ConfigError("output windows: need dt > 0, window >= dt and at least two trajectories");
    }

    // States 0-5: extended model. States 6, 7: output quadratures integrated
    // over the current step, J = int sqrt(2 kappa2) X2 dt - dW_X2 / sqrt(2 kappa2).
    Mat<8> a = Mat<8>::Zero();
    a.topLeftCorner<6, 6>() = m.drift;
    const double root = std::sqrt(2.0 * r.kappa2);
    a(6, 4) = root;
    a(7, 5) = root;
    Mat<8> d = Mat<8>::Zero();
    d.topLeftCorner<6, 6>() = m.diffusion;
    const double cross = -std::sqrt(0.5 * r.kappa2);
    d(6, 6) = d(7, 7) = 0.5;
    d(4, 6) = d(6, 4) = cross;
    d(5, 7) = d(7, 5) = cross;
    const Transition<8> step = exact_transition<8>(a, d, c.dt);
    const Mat6 stationary_root = psd_sqrt<6>(solve_extended(m));

    const std::size_t steps = step_count(c.window, c.dt);
    const double tau = static_cast<double>(steps) * c.dt;
    std::vector<double> cosines(steps);
    std::vector<double> sines(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const double phase = r.detuning2 * (static_cast<double>(s) + 0.5) * c.dt;
        cosines[s] = std::cos(phase);
        sines[s] = std::sin(phase);
    }
    std::vector<double> ox(c.n_traj);
    std::vector<double> oy(c.n_traj);
    parallel_for(c.n_traj, c.jobs, [&](std::size_t idx) {
        std::mt19937_64 rng(trajectory_seed(c.seed, idx));
        std::normal_distribution<double> normal;
        Vec<8> u = Vec<8>::Zero();
        u.head<6>() = stationary_root * draw_normal<6>(rng, normal);
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t s = 0; s < steps; ++s) {
            u[6] = 0.0;
            u[7] = 0.0;
            u = step.phi * u + step.noise * draw_normal<8>(rng, normal);
            sx += u[6] * cosines[s] - u[7] * sines[s];
            sy += u[6] * sines[s] + u[7] * cosines[s];
        }
        ox[idx] = sx / std::sqrt(tau);
        oy[idx] = sy / std::sqrt(tau);
    });

    auto variance_with_error = [](const std::vector<double>& xs) {
        const double mean = mean_and_error(xs).mean;
        std::vector<double> sq(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sq[i] = (xs[i] - mean) * (xs[i] - mean);
        }
        const MeanAndError me = mean_and_error(sq);
        const double n = static_cast<double>(xs.size());
        return MeanAndError{me.mean * n / (n - 1.0), me.std_error};
    };
    const MeanAndError vx = variance_with_error(ox);
    const MeanAndError vy = variance_with_error(oy);
    OutputWindowEstimate out;
    out.variance_x = vx.mean;
    out.stderr_x = vx.std_error;
    out.variance_y = vy.mean;
    out.stderr_y = vy.std_error;
    out.n_traj = c.n_traj;
    return out;
}

} // namespace optoent
