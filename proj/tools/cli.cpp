// cli.cpp — subcommands model, stability, entangle, sweep, threshold, readout

#include "cli.hpp"

#include "optoent/config.hpp"
#include "optoent/entanglement.hpp"
#include "optoent/errors.hpp"
#include "optoent/format.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/manifest.hpp"
#include "optoent/readout.hpp"
#include "optoent/stability.hpp"
#include "optoent/sweep.hpp"
#include "optoent/units.hpp"
#include "optoent/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>

namespace optoent {

namespace {

// Parameter source plus unit-suffixed overrides shared by every subcommand.
struct ParamOptions {
    std::string config;
    std::string preset;
    std::optional<double> power_mw;
    std::optional<double> mass_ng;
    std::optional<double> temperature_k;
    std::optional<double> temperature_mk;
    std::optional<double> wm_mhz;
    std::optional<double> length_mm;
    std::optional<double> wavelength_nm;
    std::optional<double> finesse;
    std::optional<double> quality_factor;
    std::optional<double> delta_over_wm;
    std::string kappa_convention;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "Parameter file (key = value lines)");
        app->add_option("--preset", preset,
                        "Built-in parameter set: fig1-5ng, fig1-50ng, fig2-5ng, fig2-50ng");
        app->add_option("--power-mw", power_mw, "Input laser power [mW]");
        app->add_option("--mass-ng", mass_ng, "Mirror mass [ng]");
        app->add_option("--temperature-k", temperature_k, "Bath temperature [K]");
        app->add_option("--temperature-mk", temperature_mk, "Bath temperature [mK]");
        app->add_option("--wm-mhz", wm_mhz, "Mechanical frequency w_m/2pi [MHz]");
        app->add_option("--length-mm", length_mm, "Cavity length [mm]");
        app->add_option("--wavelength-nm", wavelength_nm, "Laser wavelength [nm]");
        app->add_option("--finesse", finesse, "Cavity finesse");
        app->add_option("--quality-factor", quality_factor, "Mechanical quality factor w_m/gamma_m");
        app->add_option("--delta-over-wm", delta_over_wm, "Effective detuning Delta/w_m");
        app->add_option("--kappa-convention", kappa_convention, "full_width or half_width");
    }

    PhysicalParams resolve() const {
        if (config.empty() == preset.empty()) {
            throw ConfigError("exactly one of --config or --preset is required");
        }
        PhysicalParams p = config.empty() ? optoent::preset(preset).base : load_config(config);
        if (power_mw) {
            p.input_power = units::w_from_mw(*power_mw);
        }
        if (mass_ng) {
            p.mass = units::kg_from_ng(*mass_ng);
        }
        if (temperature_k && temperature_mk) {
            throw ConfigError("give the temperature in K or in mK, not both");
        }
        if (temperature_k) {
            p.temperature = *temperature_k;
        }
        if (temperature_mk) {
            p.temperature = units::k_from_mk(*temperature_mk);
        }
        if (wm_mhz) {
            const double q = p.quality_factor();
            const double effective_ratio = p.detuning.value / p.mech_freq;
            p.mech_freq = units::angular_from_mhz(*wm_mhz);
            p.mech_damping = p.mech_freq / q;
            if (p.detuning.kind == DetuningSpec::Kind::Effective) {
                p.detuning.value = effective_ratio * p.mech_freq;
            }
        }
        if (length_mm) {
            p.cavity_length = units::m_from_mm(*length_mm);
        }
        if (wavelength_nm) {
            p.laser_wavelength = units::m_from_nm(*wavelength_nm);
        }
        if (finesse) {
            p.finesse = *finesse;
        }
        if (quality_factor) {
            if (!(*quality_factor > 0.0)) {
                throw ConfigError("--quality-factor must be > 0");
            }
            p.mech_damping = p.mech_freq / *quality_factor;
        }
        if (delta_over_wm) {
            p.detuning = DetuningSpec::effective(*delta_over_wm * p.mech_freq);
        }
        if (!kappa_convention.empty()) {
            p.kappa_convention = parse_kappa_convention(kappa_convention);
        }
        validate(p);
        return p;
    }
};

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    return f;
}

void close_output(std::ofstream& f, const std::string& path) {
    f.close();
    if (!f) {
        throw ConfigError("failed writing output file '" + path + "'");
    }
}

class Runner {
public:
    Runner(std::vector<std::string> args, std::ostream& out) : args_(std::move(args)), out_(out) {}

    RunManifest manifest(const std::string& command) const {
        RunManifest m;
        m.command = command;
        m.command_line = args_;
        m.started_utc = started_;
        m.finished_utc = utc_timestamp();
        return m;
    }

    void kv(const std::string& key, const std::string& value) { out_ << key << '=' << value << '\n'; }
    void kv(const std::string& key, double value) { kv(key, format_double(value)); }

    std::ostream& out() { return out_; }

private:
    std::vector<std::string> args_;
    std::ostream& out_;
    std::string started_ = utc_timestamp();
};

void report_model(Runner& r, const PhysicalParams& p, const ResolvedModel& rm) {
    const DerivedModel& d = rm.model;
    r.kv("kappa_rad_s", d.kappa());
    r.kv("kappa_convention", std::string(to_string(p.kappa_convention)));
    r.kv("G0_rad_s", d.constants.bare_coupling);
    r.kv("drive_E_rad_s", d.constants.drive);
    r.kv("nbar", d.nbar());
    r.kv("alpha_s", d.alpha_s);
    r.kv("q_s", d.displacement);
    r.kv("delta_rad_s", d.detuning);
    r.kv("delta_over_wm", d.detuning / d.mech_freq);
    r.kv("bare_delta_rad_s", d.constants.bare_detuning);
    r.kv("G_rad_s", d.coupling);
    r.kv("G_over_2pi_hz", units::hz_from_angular(d.coupling));
    r.kv("branches", std::to_string(rm.branch_count));
    r.kv("multistable", format_bool(rm.branch_count > 1));
}

void report_stability(Runner& r, const StabilityReport& s) {
    r.kv("rh_condition_1", s.rh_condition_1);
    r.kv("rh_condition_2", s.rh_condition_2);
    r.kv("eig_max_real", s.eig_max_real);
    r.kv("margin", s.margin);
    r.kv("stable_rh", format_bool(s.stable_rh));
    r.kv("stable_eig", format_bool(s.stable_eig));
    r.kv("agree", format_bool(s.agree));
    r.kv("stable", format_bool(s.stable()));
}

void write_cm_csv(const std::string& path, const Mat4& v) {
    std::ofstream f = open_output(path);
    for (int k = 0; k < 16; ++k) {
        f << (k > 0 ? "," : "") << format_double(v(k / 4, k % 4));
    }
    f << '\n';
    close_output(f, path);
}

int cmd_model(Runner& r, const ParamOptions& po) {
    const PhysicalParams p = po.resolve();
    report_model(r, p, resolve_model(p));
    return 0;
}

int cmd_stability(Runner& r, const ParamOptions& po) {
    const PhysicalParams p = po.resolve();
    const ResolvedModel rm = resolve_model(p);
    r.kv("delta_over_wm", rm.model.detuning / rm.model.mech_freq);
    report_stability(r, analyze_stability(rm.model));
    return 0;
}

int cmd_entangle(Runner& r, const ParamOptions& po, const std::string& dump_cm) {
    const PhysicalParams p = po.resolve();
    const ResolvedModel rm = resolve_model(p);
    const StabilityReport s = analyze_stability(rm.model);
    if (!s.stable()) {
        throw UnstableSystem("steady state at Delta/w_m = " +
                             format_double(rm.model.detuning / rm.model.mech_freq) +
                             " is unstable: " + s.failure_reason());
    }
    const CovarianceMatrix v = solve_lyapunov(rm.model);
    const EntanglementReport e = analyze_entanglement(v);
    r.kv("delta_over_wm", rm.model.detuning / rm.model.mech_freq);
    r.kv("G_rad_s", rm.model.coupling);
    r.kv("nbar", rm.model.nbar());
    r.kv("branches", std::to_string(rm.branch_count));
    r.kv("eta_minus", e.eta_minus);
    r.kv("eta_minus_spectral", e.eta_minus_spectral);
    r.kv("log_neg", e.log_neg);
    r.kv("simon_entangled", format_bool(e.simon_entangled));
    r.kv("sigma", e.sigma);
    r.kv("det_v", e.det_v);
    if (e.diagnostic) {
        r.kv("diagnostic", *e.diagnostic);
    }
    if (!dump_cm.empty()) {
        write_cm_csv(dump_cm, v.matrix());
        RunManifest m = r.manifest("entangle");
        m.params = p;
        m.model = rm.model;
        write_manifest(dump_cm, m);
    }
    return 0;
}

struct GridOptions {
    std::string axis;
    std::optional<double> from;
    std::optional<double> to;
    std::size_t points = 0;
    bool log = false;
};

SweepSpec resolve_sweep(const ParamOptions& po, const GridOptions& g, bool need_grid) {
    SweepSpec spec;
    const bool preset_grid = !po.preset.empty() && g.axis.empty();
    if (preset_grid) {
        spec = preset(po.preset);
    } else if (g.axis.empty()) {
        throw ConfigError("--axis is required with --config");
    } else {
        spec.axis = parse_sweep_axis(g.axis);
    }
    spec.base = po.resolve();
    if (!need_grid) {
        return spec;
    }
    if (!preset_grid || g.from || g.to || g.points > 0) {
        if (!g.from || !g.to || g.points == 0) {
            throw ConfigError("--from, --to and --points are required for a custom grid");
        }
        spec.grid = g.log ? log_grid(*g.from, *g.to, g.points) : linear_grid(*g.from, *g.to, g.points);
    }
    return spec;
}

int cmd_sweep(Runner& r, const ParamOptions& po, const GridOptions& g, const std::string& out_path,
              const std::string& dump_cm, unsigned jobs) {
    SweepSpec spec = resolve_sweep(po, g, true);
    spec.dump_cm = !dump_cm.empty();
    spec.jobs = jobs;
    const std::vector<SweepRow> rows = run_sweep(spec);

    RunManifest m = r.manifest("sweep");
    m.params = spec.base;
    m.extra["axis"] = std::string(to_string(spec.axis));
    m.extra["points"] = spec.grid.size();
    m.extra["grid_first"] = spec.grid.front();
    m.extra["grid_last"] = spec.grid.back();
    if (!po.preset.empty()) {
        m.extra["preset"] = po.preset;
    }
    if (out_path.empty()) {
        write_csv(r.out(), rows);
    } else {
        std::ofstream f = open_output(out_path);
        write_csv(f, rows);
        close_output(f, out_path);
        write_manifest(out_path, m);
    }
    if (!dump_cm.empty()) {
        std::ofstream f = open_output(dump_cm);
        write_cm_dump(f, rows);
        close_output(f, dump_cm);
        write_manifest(dump_cm, m);
    }
    return 0;
}

int cmd_threshold(Runner& r, const ParamOptions& po, const GridOptions& g,
                  const std::string& out_path) {
    const SweepSpec spec = resolve_sweep(po, g, false);
    double lo = 0.0;
    double hi = 0.0;
    if (g.from && g.to) {
        lo = *g.from;
        hi = *g.to;
    } else if (!po.preset.empty() && g.axis.empty() && !g.from && !g.to) {
        const SweepSpec grid = preset(po.preset);
        lo = grid.grid.front();
        hi = grid.grid.back();
    } else {
        throw ConfigError("--from and --to give the bracket [entangled, separable]");
    }
    const double t = find_threshold(spec, lo, hi);
    const std::string axis(to_string(spec.axis));
    r.kv("axis", axis);
    r.kv("bracket_lo", lo);
    r.kv("bracket_hi", hi);
    r.kv("threshold", t);
    if (!out_path.empty()) {
        std::ofstream f = open_output(out_path);
        f << "axis=" << axis << "\nbracket_lo=" << format_double(lo) << "\nbracket_hi="
          << format_double(hi) << "\nthreshold=" << format_double(t) << '\n';
        close_output(f, out_path);
        RunManifest m = r.manifest("threshold");
        m.params = spec.base;
        m.extra["axis"] = axis;
        m.extra["bracket"] = {lo, hi};
        m.extra["threshold"] = t;
        write_manifest(out_path, m);
    }
    return 0;
}

struct ReadoutOptions {
    bool back_action = false;
    std::size_t traj = 32;
    std::optional<double> dt;
    std::optional<double> burn_in;
    std::optional<double> sample_time;
    std::uint64_t seed = kDefaultSeed;
    double kappa2_over_wm = 1.0 / 20.0;
    double rate_over_kappa2 = 1.0 / 20.0;
    std::optional<double> alpha2;
    std::string integrator = "exact";
};

int cmd_readout(Runner& r, const ParamOptions& po, const ReadoutOptions& ro,
                const std::string& out_path, unsigned jobs) {
    const PhysicalParams p = po.resolve();
    const ResolvedModel rm = resolve_model(p);
    const DerivedModel& d = rm.model;
    const StabilityReport s = analyze_stability(d);
    if (!s.stable()) {
        throw UnstableSystem("steady state is unstable: " + s.failure_reason());
    }

    const double kappa2 = ro.kappa2_over_wm * d.mech_freq;
    ReadoutParams rp = make_readout(p, d, kappa2, d.mech_freq, 0.0, p.cavity_length,
                                    d.constants.cavity_freq);
    const double alpha2 = ro.alpha2 ? *ro.alpha2 : alpha2_for_rate(rp, ro.rate_over_kappa2 * kappa2);
    rp = make_readout(p, d, kappa2, d.mech_freq, alpha2, p.cavity_length, d.constants.cavity_freq);
    const ExtendedModel ext = build_extended(d, rp, ro.back_action);

    TrajectoryConfig tc = default_trajectory_config(d, rp, ext);
    tc.n_traj = ro.traj;
    tc.seed = ro.seed;
    tc.jobs = jobs;
    if (ro.dt) {
        tc.dt = *ro.dt;
    }
    if (ro.burn_in) {
        tc.burn_in = *ro.burn_in;
    }
    if (ro.sample_time) {
        tc.sample_time = *ro.sample_time;
    }
    if (ro.integrator == "exact") {
        tc.integrator = Integrator::Exact;
    } else if (ro.integrator == "euler-maruyama") {
        tc.integrator = Integrator::EulerMaruyama;
    } else {
        throw ConfigError("--integrator must be exact or euler-maruyama");
    }
    validate(tc, d, rp, ext);

    const CMEstimate est = simulate_trajectories(ext, tc);
    const ReconstructedEntanglement rec = reconstruct_entanglement(est);
    const Mat4 analytic = solve_extended(ext).topLeftCorner<4, 4>();
    const double analytic_en = log_negativity(CovarianceMatrix(analytic));

    for (const std::string& f : rp.regime_failures) {
        r.kv("regime_warning", f);
    }
    r.kv("alpha2", rp.alpha2);
    r.kv("G2_rad_s", rp.coupling2);
    r.kv("back_action", format_bool(ro.back_action));
    r.kv("back_action_negligible", format_bool(rp.back_action_negligible));
    if (rp.rwa_ok && rp.adiabatic_ok) {
        r.kv("output_gain", adiabatic_output_gain(rp));
    }
    r.kv("dt_s", tc.dt);
    r.kv("burn_in_s", tc.burn_in);
    r.kv("sample_time_s", tc.sample_time);
    r.kv("n_traj", std::to_string(tc.n_traj));
    r.kv("log_neg", rec.report.log_neg);
    r.kv("log_neg_sigma", rec.log_neg_sigma);
    r.kv("log_neg_analytic", analytic_en);

    std::vector<std::pair<int, int>> entries;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            entries.emplace_back(i, j);
        }
    }
    auto emit = [&](std::ostream& f) {
        std::string sep;
        for (const char* prefix : {"v", "stderr", "analytic"}) {
            for (const auto& [i, j] : entries) {
                f << sep << prefix << i << j;
                sep = ",";
            }
        }
        f << ",log_neg,log_neg_sigma,log_neg_analytic\n";
        sep.clear();
        for (const Mat4* m : {&est.mean, &est.std_error, &analytic}) {
            for (const auto& [i, j] : entries) {
                f << sep << format_double((*m)(i, j));
                sep = ",";
            }
        }
        f << ',' << format_double(rec.report.log_neg) << ',' << format_double(rec.log_neg_sigma)
          << ',' << format_double(analytic_en) << '\n';
    };
    if (out_path.empty()) {
        emit(r.out());
        return 0;
    }
    std::ofstream f = open_output(out_path);
    emit(f);
    close_output(f, out_path);

    RunManifest m = r.manifest("readout");
    m.params = p;
    m.model = d;
    m.master_seed = tc.seed;
    for (std::size_t i = 0; i < tc.n_traj; ++i) {
        m.seeds.push_back(trajectory_seed(tc.seed, i));
    }
    m.extra["kappa2_rad_s"] = rp.kappa2;
    m.extra["detuning2_rad_s"] = rp.detuning2;
    m.extra["alpha2"] = rp.alpha2;
    m.extra["G2_rad_s"] = rp.coupling2;
    m.extra["back_action"] = ro.back_action;
    m.extra["dt_s"] = tc.dt;
    m.extra["burn_in_s"] = tc.burn_in;
    m.extra["sample_time_s"] = tc.sample_time;
    m.extra["n_traj"] = tc.n_traj;
    m.extra["integrator"] = ro.integrator;
    m.extra["resample_seed"] = kDefaultSeed;
    write_manifest(out_path, m);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stationary optomechanical entanglement: covariance, sweeps, readout simulation",
                 "optoent"};
    app.set_version_flag("--version", std::string("optoent ") + kVersion);
    app.require_subcommand(1);
    unsigned jobs = 0;

    ParamOptions po;
    std::string out_path;
    std::string dump_cm;
    GridOptions grid;
    ReadoutOptions ro;

    CLI::App* model = app.add_subcommand("model", "Print the derived linearized model");
    po.attach(model);

    CLI::App* stability = app.add_subcommand("stability", "Routh-Hurwitz and eigenvalue stability report");
    po.attach(stability);

    CLI::App* entangle = app.add_subcommand("entangle", "Stationary covariance and entanglement at one point");
    po.attach(entangle);
    entangle->add_option("--dump-cm", dump_cm, "Write the covariance matrix as one 16-column CSV row");

    CLI::App* sweep = app.add_subcommand("sweep", "Entanglement along one parameter axis (CSV)");
    po.attach(sweep);
    sweep->add_option("--axis", grid.axis,
                      "detuning_over_wm, temperature_k, mass_kg or quality_factor");
    sweep->add_option("--from", grid.from, "First grid value");
    sweep->add_option("--to", grid.to, "Last grid value");
    sweep->add_option("--points", grid.points, "Number of grid points");
    sweep->add_flag("--log", grid.log, "Logarithmic grid spacing");
    sweep->add_option("--out", out_path, "Output CSV (stdout when omitted)");
    sweep->add_option("--dump-cm", dump_cm, "Also write covariance matrices, one row per point");
    sweep->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();

    CLI::App* threshold = app.add_subcommand("threshold", "Bisect the axis value where entanglement vanishes");
    po.attach(threshold);
    threshold->add_option("--axis", grid.axis, "Axis to bisect along");
    threshold->add_option("--from", grid.from, "Bracket end with entanglement");
    threshold->add_option("--to", grid.to, "Bracket end without entanglement");
    threshold->add_option("--out", out_path, "Also write the result to this file");

    CLI::App* readout = app.add_subcommand("readout", "Simulated readout experiment from stochastic trajectories");
    po.attach(readout);
    readout->add_flag("--back-action", ro.back_action, "Include readout back-action on the mirror");
    readout->add_option("--traj", ro.traj, "Number of trajectories (>= 2)")->capture_default_str();
    readout->add_option("--dt", ro.dt, "Integration step [s]");
    readout->add_option("--burn-in", ro.burn_in, "Discarded initial time per trajectory [s]");
    readout->add_option("--sample-time", ro.sample_time, "Averaging time per trajectory [s]");
    readout->add_option("--seed", ro.seed, "Master seed")->capture_default_str();
    readout->add_option("--kappa2-over-wm", ro.kappa2_over_wm, "Readout cavity decay kappa2/w_m")
        ->capture_default_str();
    readout->add_option("--rate-over-kappa2", ro.rate_over_kappa2,
                        "Readout coupling (G2 alpha2/sqrt2)/kappa2")
        ->capture_default_str();
    readout->add_option("--alpha2", ro.alpha2, "Readout intracavity amplitude (overrides --rate-over-kappa2)");
    readout->add_option("--integrator", ro.integrator, "exact or euler-maruyama")->capture_default_str();
    readout->add_option("--out", out_path, "Output CSV (stdout when omitted)");
    readout->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Config);
    }

    Runner runner(args, out);
    try {
        if (model->parsed()) {
            return cmd_model(runner, po);
        }
        if (stability->parsed()) {
            return cmd_stability(runner, po);
        }
        if (entangle->parsed()) {
            return cmd_entangle(runner, po, dump_cm);
        }
        if (sweep->parsed()) {
            return cmd_sweep(runner, po, grid, out_path, dump_cm, jobs);
        }
        if (threshold->parsed()) {
            return cmd_threshold(runner, po, grid, out_path);
        }
        if (readout->parsed()) {
            return cmd_readout(runner, po, ro, out_path, jobs);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Numerical);
    }
    return static_cast<int>(ExitCode::Config);
}

} // namespace optoent
