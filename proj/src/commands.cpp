#include "rds/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "rds/benchmark.hpp"
#include "rds/io.hpp"
#include "rds/random.hpp"

namespace rds {

namespace {

constexpr std::uint64_t kTagPlant = 0x70;

// ---- config schema ------------------------------------------------------

const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"system", {"model_file"}},
        {"distribution", {"file", "zero_covariance"}},
        {"plant",
         {"type", "s1_std", "s2_std", "model_file", "distribution_file", "x0"}},
        {"enkf", {"members", "seed", "q_diag", "r_diag", "eps_v", "init_jitter"}},
        {"identify",
         {"k0", "k1", "mls_order", "mls_amplitude", "divergence_threshold"}},
        {"synthesize",
         {"lambda_lo", "lambda_hi", "tol_lambda_sq", "feas_margin", "cond_floor", "rank_tol",
          "gram_file"}},
        {"analyze", {"gain_file", "lambda_max"}},
        {"simulate",
         {"gain_file", "horizon", "paths", "base_seed", "d_amplitude", "d_switch_step",
          "filter_sees_external_input", "rate_k1", "rate_k2"}},
        {"reproduce", {"paths", "base_seed"}},
        {"output", {"dir"}},
    };
    return schema;
}

void validate_known_keys(const ConfigMap& cfg) {
    const auto& schema = config_schema();
    for (const auto& section : cfg.sections) {
        const auto it = schema.find(section.name);
        if (it == schema.end()) throw ConfigError("unknown config section [" + section.name + "]");
        for (const auto& [key, value] : section.entries)
            if (!it->second.count(key))
                throw ConfigError("unknown config key [" + section.name + "] " + key);
    }
}

// ---- common loading helpers ----------------------------------------------

struct CommandContext {
    ConfigMap cfg;
    std::filesystem::path out_dir;
    CliOptions opts;
};

CommandContext load_context(const CliOptions& opts) {
    CommandContext ctx;
    ctx.opts = opts;
    if (opts.config.empty()) throw ConfigError("missing --config PATH");
    if (!std::filesystem::exists(opts.config))
        throw ConfigError("config file does not exist: " + opts.config.string());
    ctx.cfg = read_config_file(opts.config);
    validate_known_keys(ctx.cfg);
    ctx.out_dir = opts.out ? *opts.out
                           : std::filesystem::path(ctx.cfg.get_string("output", "dir", "out"));
    return ctx;
}

std::filesystem::path resolve_path(const CommandContext& ctx, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_relative() && ctx.opts.config.has_parent_path())
        p = ctx.opts.config.parent_path() / p;
    if (!std::filesystem::exists(p)) throw ConfigError("file does not exist: " + p.string());
    return p;
}

RandomLinearSystem load_system(const CommandContext& ctx) {
    return read_system_file(resolve_path(ctx, ctx.cfg.get_string("system", "model_file")));
}

DistributionModel load_distribution(const CommandContext& ctx, const RandomLinearSystem& sys) {
    DistributionModel model =
        read_model_file(resolve_path(ctx, ctx.cfg.get_string("distribution", "file")));
    require(model.dim == sys.coeffs.Z, "distribution dimension does not match the system model");
    if (ctx.cfg.get_flag("distribution", "zero_covariance", false))
        model = DistributionModel::from_moments(model.mean,
                                                Matrix::Zero(model.dim, model.dim));
    return model;
}

EnkfConfig load_enkf(const CommandContext& ctx) {
    EnkfConfig enkf;
    enkf.members = static_cast<int>(ctx.cfg.get_integer("enkf", "members", 300));
    enkf.seed = static_cast<std::uint64_t>(ctx.cfg.get_integer("enkf", "seed", 1));
    if (ctx.opts.seed) enkf.seed = *ctx.opts.seed;
    if (ctx.cfg.has("enkf", "eps_v")) enkf.eps_v = ctx.cfg.get_number("enkf", "eps_v");
    enkf.init_jitter = ctx.cfg.get_number("enkf", "init_jitter", 0.0);
    return enkf;
}

Matrix diag_from_config(const CommandContext& ctx, const std::string& key, Index expected,
                        const char* what) {
    const std::vector<double> d = ctx.cfg.get_numbers("enkf", key);
    require(static_cast<Index>(d.size()) == expected,
            std::string(what) + " diagonal must have length " + std::to_string(expected));
    Vector v = Eigen::Map<const Vector>(d.data(), static_cast<Index>(d.size()));
    return Matrix(v.asDiagonal());
}

std::unique_ptr<Plant> load_plant(const CommandContext& ctx, std::uint64_t seed) {
    const std::string type = ctx.cfg.get_string("plant", "type", "networked");
    if (type == "networked") {
        const double s1 = ctx.cfg.get_number("plant", "s1_std", 0.2);
        const double s2 = ctx.cfg.get_number("plant", "s2_std", 0.3);
        return make_networked_plant(seed, s1, s2);
    }
    if (type == "model") {
        RandomLinearSystem sys = read_system_file(
            resolve_path(ctx, ctx.cfg.get_string("plant", "model_file")));
        DistributionModel model = read_model_file(
            resolve_path(ctx, ctx.cfg.get_string("plant", "distribution_file")));
        Vector x0 = Vector::Zero(sys.coeffs.n);
        if (ctx.cfg.has("plant", "x0")) {
            const std::vector<double> raw = ctx.cfg.get_numbers("plant", "x0");
            require(static_cast<Index>(raw.size()) == sys.coeffs.n,
                    "plant x0 must have length n");
            x0 = Eigen::Map<const Vector>(raw.data(), static_cast<Index>(raw.size()));
        }
        return make_model_plant(std::move(sys), std::move(model), std::move(x0), seed);
    }
    throw ConfigError("unknown plant type '" + type + "' (networked or model)");
}

SynthesisOptions load_synthesis_options(const CommandContext& ctx) {
    SynthesisOptions opts;
    opts.lambda_lo = ctx.cfg.get_number("synthesize", "lambda_lo", opts.lambda_lo);
    opts.lambda_hi = ctx.cfg.get_number("synthesize", "lambda_hi", opts.lambda_hi);
    opts.tol_lambda_sq = ctx.cfg.get_number("synthesize", "tol_lambda_sq", opts.tol_lambda_sq);
    opts.feas_margin = ctx.cfg.get_number("synthesize", "feas_margin", opts.feas_margin);
    opts.cond_floor = ctx.cfg.get_number("synthesize", "cond_floor", opts.cond_floor);
    return opts;
}

GramFactor load_gram_factor(const CommandContext& ctx) {
    const double rank_tol = ctx.cfg.get_number("synthesize", "rank_tol", 1e-9);
    if (ctx.cfg.has("synthesize", "gram_file")) {
        const GramMatrix gram =
            read_gram_file(resolve_path(ctx, ctx.cfg.get_string("synthesize", "gram_file")));
        return factorize_gram(gram, rank_tol);
    }
    const RandomLinearSystem sys = load_system(ctx);
    const DistributionModel model = load_distribution(ctx, sys);
    return factorize_gram(gram_closed_form(sys.coeffs, model), rank_tol);
}

void write_plots(const CommandContext& ctx, const MonteCarloStats& stats) {
    if (ctx.opts.no_plots) return;
    std::vector<PlotSeries> rms_series{{"rms", stats.rms}};
    write_text_atomic(ctx.out_dir / "plots" / "rms.svg",
                      format_line_plot_svg("rms of plant state", rms_series));
    if (!stats.trajectories.empty() && !stats.trajectories.front().true_state.empty()) {
        const Trajectory& traj = stats.trajectories.front();
        const Index dim = traj.true_state.front().size();
        std::vector<PlotSeries> state_series;
        for (Index i = 0; i < dim; ++i) {
            PlotSeries s;
            s.label = "q_" + std::to_string(i + 1);
            for (const Vector& q : traj.true_state) s.values.push_back(q[i]);
            state_series.push_back(std::move(s));
        }
        write_text_atomic(ctx.out_dir / "plots" / "state_path0.svg",
                          format_line_plot_svg("plant state, first path", state_series));
    }
}

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

int run_command(const char* name, int (*body)(const CliOptions&), const CliOptions& opts) {
    try {
        return body(opts);
    } catch (const ConfigError& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return kExitDivergence;
    } catch (const NumericalError& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return kExitNumerical;
    }
}

// ---- command bodies -------------------------------------------------------

int identify_body(const CliOptions& opts) {
    CommandContext ctx = load_context(opts);
    const RandomLinearSystem sys = load_system(ctx);

    IdentificationConfig cfg;
    cfg.k0 = ctx.cfg.get_integer("identify", "k0", 20);
    cfg.k1 = ctx.cfg.get_integer("identify", "k1", 80);
    cfg.mls_order = static_cast<int>(ctx.cfg.get_integer("identify", "mls_order", 10));
    cfg.input_amplitude = ctx.cfg.get_number("identify", "mls_amplitude", 1.0);
    cfg.divergence_threshold =
        ctx.cfg.get_number("identify", "divergence_threshold", 1e6);
    cfg.enkf = load_enkf(ctx);
    cfg.Q = diag_from_config(ctx, "q_diag", sys.coeffs.n + sys.coeffs.Z, "process noise");
    cfg.R = diag_from_config(ctx, "r_diag", sys.coeffs.p, "measurement noise");

    std::unique_ptr<Plant> plant = load_plant(ctx, subkey(cfg.enkf.seed, kTagPlant));
    const IdentificationResult result = identify(*plant, sys, cfg);

    write_text_atomic(ctx.out_dir / "model.txt", format_model_file(result.to_model()));
    write_text_atomic(ctx.out_dir / "gram.txt", format_gram_file(result.empirical_gram));
    write_text_atomic(ctx.out_dir / "trace.csv", format_identification_trace_csv(result));
    std::cout << "identified mean";
    for (Index i = 0; i < result.mean.size(); ++i) std::cout << " " << fmt4(result.mean[i]);
    std::cout << "\n";
    if (result.degenerate_window)
        std::cout << "warning: window has a single sample, covariance reported as zero\n";
    return kExitOk;
}

int synthesize_body(const CliOptions& opts) {
    CommandContext ctx = load_context(opts);
    const GramFactor factor = load_gram_factor(ctx);
    const SynthesisResult res = synthesize(factor, load_synthesis_options(ctx));
    write_text_atomic(ctx.out_dir / "report.txt", format_synthesis_report(res, factor.nbar));
    if (!res.stabilizable) {
        std::cerr << "synthesize: not second-moment stabilizable within (0, 1)\n";
        return kExitInfeasible;
    }
    write_text_atomic(ctx.out_dir / "gain.txt", format_gain_file(res.F));
    std::cout << "nbar " << factor.nbar << "\nlambda_star " << fmt4(res.lambda_star) << "\n";
    return kExitOk;
}

int analyze_body(const CliOptions& opts) {
    CommandContext ctx = load_context(opts);
    const GramFactor factor = load_gram_factor(ctx);
    const Matrix F =
        read_gain_file(resolve_path(ctx, ctx.cfg.get_string("analyze", "gain_file")));
    AnalysisOptions aopts;
    aopts.lambda_max = ctx.cfg.get_number("analyze", "lambda_max", aopts.lambda_max);
    if (ctx.opts.lambda_max) aopts.lambda_max = *ctx.opts.lambda_max;
    const AnalysisResult res = analyze(factor, F, aopts);
    write_text_atomic(ctx.out_dir / "analysis.txt", format_analysis_report(res));
    if (!res.bounded) {
        std::cerr << "analyze: no certificate below lambda_max, second moment may grow faster\n";
        return kExitInfeasible;
    }
    std::cout << "lambda_star " << fmt4(res.lambda_star) << "\n";
    return kExitOk;
}

int simulate_body(const CliOptions& opts) {
    CommandContext ctx = load_context(opts);
    const RandomLinearSystem sys = load_system(ctx);
    const Matrix F =
        read_gain_file(resolve_path(ctx, ctx.cfg.get_string("simulate", "gain_file")));

    ControllerConfig ctrl;
    ctrl.F = F;
    ctrl.enkf = load_enkf(ctx);
    ctrl.Q = diag_from_config(ctx, "q_diag", sys.coeffs.n + sys.coeffs.Z, "process noise");
    ctrl.R = diag_from_config(ctx, "r_diag", sys.coeffs.p, "measurement noise");
    ctrl.sys = sys;
    ctrl.psi0 = Vector::Zero(sys.coeffs.n + sys.coeffs.Z);
    ctrl.filter_sees_external_input =
        ctx.cfg.get_flag("simulate", "filter_sees_external_input", true);

    SimulationConfig sim;
    sim.horizon = ctx.cfg.get_integer("simulate", "horizon", 101);
    const double d_amp = ctx.cfg.get_number("simulate", "d_amplitude", 10.0);
    const long d_switch = ctx.cfg.get_integer("simulate", "d_switch_step", 50);
    for (long k = 0; k < sim.horizon; ++k)
        sim.d.push_back(Vector::Constant(sys.coeffs.m, k < d_switch ? d_amp : 0.0));
    sim.keep_trajectories = true;

    int n_paths = static_cast<int>(ctx.cfg.get_integer("simulate", "paths", 200));
    if (ctx.opts.paths) n_paths = *ctx.opts.paths;
    std::uint64_t base_seed =
        static_cast<std::uint64_t>(ctx.cfg.get_integer("simulate", "base_seed", 1));
    if (ctx.opts.seed) base_seed = *ctx.opts.seed;

    RunSpec spec;
    spec.controller = ctrl;
    spec.sim = sim;
    const CommandContext* ctx_ptr = &ctx;
    spec.make_plant = [ctx_ptr]() { return load_plant(*ctx_ptr, 0); };

    const MonteCarloStats stats = monte_carlo(spec, n_paths, base_seed);
    write_text_atomic(ctx.out_dir / "rms.csv", format_rms_csv(stats));
    for (size_t i = 0; i < stats.trajectories.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "path_%03zu.csv", i);
        write_text_atomic(ctx.out_dir / "paths" / name,
                          format_trajectory_csv(stats.trajectories[i]));
    }
    write_plots(ctx, stats);

    const long k1 = ctx.cfg.get_integer("simulate", "rate_k1", 60);
    const long k2 = ctx.cfg.get_integer("simulate", "rate_k2", 80);
    if (k1 >= 0 && k2 > k1 && k2 < sim.horizon && stats.rms[static_cast<size_t>(k1)] > 0.0)
        std::cout << "convergence_rate(" << k1 << "," << k2 << ") "
                  << fmt4(convergence_rate(stats, k1, k2)) << "\n";

    if (!stats.failures.empty()) {
        std::string report = "failed paths " + std::to_string(stats.failures.size()) + "\n";
        for (const auto& f : stats.failures)
            report += std::to_string(f.path) + " seed " + std::to_string(f.seed) + " " +
                      f.message + "\n";
        write_text_atomic(ctx.out_dir / "failures.txt", report);
        std::cerr << "simulate: " << stats.failures.size() << " of " << n_paths
                  << " paths failed, partial results written\n";
        if (stats.failures.size() == static_cast<size_t>(n_paths)) return kExitDivergence;
    }
    return kExitOk;
}

int plot_body(const CliOptions& opts) {
    CommandContext ctx = load_context(opts);
    const std::filesystem::path rms_path = ctx.out_dir / "rms.csv";
    if (!std::filesystem::exists(rms_path))
        throw ConfigError("plot: no rms.csv under " + ctx.out_dir.string());
    std::ifstream in(rms_path);
    std::string line;
    std::getline(in, line);  // header
    PlotSeries rms{"rms", {}};
    while (std::getline(in, line)) {
        const size_t comma = line.find(',');
        if (comma == std::string::npos) continue;
        rms.values.push_back(std::stod(line.substr(comma + 1)));
    }
    write_text_atomic(ctx.out_dir / "plots" / "rms.svg",
                      format_line_plot_svg("rms of plant state", {rms}));
    return kExitOk;
}

// Band checks for the bundled reproduction run.
struct BandCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

int reproduce_body(const CliOptions& opts) {
    CommandContext ctx = load_context(opts);
    int n_paths = static_cast<int>(ctx.cfg.get_integer("reproduce", "paths", 200));
    if (ctx.opts.paths) n_paths = *ctx.opts.paths;
    std::uint64_t base_seed =
        static_cast<std::uint64_t>(ctx.cfg.get_integer("reproduce", "base_seed", 1));
    if (ctx.opts.seed) base_seed = *ctx.opts.seed;

    std::vector<BandCheck> checks;
    std::ostringstream log;
    const RandomLinearSystem sys = benchmark::system_model();

    // Stage 1: identification on the networked plant.
    IdentificationConfig id_cfg = benchmark::identification_config(base_seed);
    std::unique_ptr<Plant> plant = make_networked_plant(subkey(base_seed, kTagPlant));
    const IdentificationResult ident = identify(*plant, sys, id_cfg);
    write_text_atomic(ctx.out_dir / "identify" / "model.txt",
                      format_model_file(ident.to_model()));
    write_text_atomic(ctx.out_dir / "identify" / "trace.csv",
                      format_identification_trace_csv(ident));
    {
        const Vector err = ident.mean - benchmark::true_parameter_mean();
        const bool mean_ok = err.cwiseAbs().maxCoeff() <= 0.2;
        const double var2 = ident.covariance(1, 1);
        const bool var_ok = var2 >= 0.03 && var2 <= 0.15;
        checks.push_back({"identification mean within 0.2 of expected", mean_ok,
                          "mean " + fmt4(ident.mean[0]) + " " + fmt4(ident.mean[1]) + " " +
                              fmt4(ident.mean[2])});
        checks.push_back({"identification xi_2 variance in [0.03, 0.15]", var_ok,
                          "variance " + fmt4(var2)});
    }

    // Stage 2: synthesis from the reported moments.
    const GramFactor factor =
        factorize_gram(gram_closed_form(sys.coeffs, benchmark::reported_model()));
    const SynthesisResult synth = synthesize(factor);
    write_text_atomic(ctx.out_dir / "synthesize" / "report.txt",
                      format_synthesis_report(synth, factor.nbar));
    if (!synth.stabilizable) {
        std::cerr << "reproduce-paper: synthesis stage failed\n";
        return kExitInfeasible;
    }
    write_text_atomic(ctx.out_dir / "synthesize" / "gain.txt", format_gain_file(synth.F));
    checks.push_back({"gram factor rank 4", factor.nbar == 4,
                      "nbar " + std::to_string(factor.nbar)});
    checks.push_back({"synthesis lambda in 0.8432 +/- 0.005",
                      std::abs(synth.lambda_star - 0.8432) <= 0.005,
                      "lambda " + fmt4(synth.lambda_star)});
    log << "synthesized lambda " << fmt4(synth.lambda_star) << "\n";

    // Synthesis from the moments we just identified, for reference.
    const SynthesisResult synth_id =
        synthesize(factorize_gram(gram_closed_form(sys.coeffs, ident.to_model())));
    log << "lambda from identified moments " << fmt4(synth_id.lambda_star) << "\n";

    // Stage 3: nominal synthesis with the covariance discarded.
    const SynthesisResult nominal = synthesize(factorize_gram(gram_closed_form(
        sys.coeffs, DistributionModel::from_moments(benchmark::reported_mean(),
                                                    Matrix::Zero(3, 3)))));
    checks.push_back({"nominal synthesis lambda in 0.1143 +/- 0.005",
                      nominal.stabilizable && std::abs(nominal.lambda_star - 0.1143) <= 0.005,
                      "lambda " + fmt4(nominal.lambda_star)});

    // Stage 4: pole placement on the mean model.
    const CoefficientValue mean_coeffs = eval_coeff(sys.coeffs, benchmark::reported_mean());
    const Matrix F_pp = pole_place_siso(mean_coeffs.A, mean_coeffs.B,
                                        benchmark::comparison_poles());
    {
        const Matrix ref = benchmark::reported_pole_gain();
        double rel = 0.0;
        for (Index j = 0; j < 6; ++j)
            rel = std::max(rel, std::abs(F_pp(0, j) - ref(0, j)) / std::abs(ref(0, j)));
        checks.push_back(
            {"pole placement gain matches reference to 1e-3", rel <= 1e-3,
             "max relative error " + fmt4(rel)});
    }

    // Stage 5: analysis of the synthesized gain.
    const AnalysisResult anal = analyze(factor, synth.F);
    checks.push_back({"analysis of synthesized gain below 0.85",
                      anal.bounded && anal.lambda_star <= 0.85,
                      "lambda " + fmt4(anal.lambda_star)});

    // Stage 6: closed-loop Monte Carlo with the synthesized gain.
    RunSpec spec;
    spec.make_plant = []() { return make_networked_plant(0); };
    spec.controller = benchmark::controller_config(synth.F, base_seed);
    spec.sim = benchmark::simulation_config();
    const MonteCarloStats stats = monte_carlo(spec, n_paths, base_seed);
    write_text_atomic(ctx.out_dir / "simulate" / "rms.csv", format_rms_csv(stats));
    if (!ctx.opts.no_plots)
        write_text_atomic(ctx.out_dir / "plots" / "rms.svg",
                          format_line_plot_svg("rms of plant state", {{"rms", stats.rms}}));
    const double rate = convergence_rate(stats, 60, 80);
    checks.push_back({"closed-loop convergence rate in [0.80, 0.90]",
                      rate >= 0.80 && rate <= 0.90, "rate " + fmt4(rate)});

    // Stage 7: comparison gains in the same stochastic loop.
    auto divergence_check = [&](const Matrix& F, const std::string& label) {
        RunSpec cspec = spec;
        cspec.controller->F = F;
        const MonteCarloStats cstats = monte_carlo(cspec, n_paths, base_seed);
        const bool grew = cstats.rms[100] > cstats.rms[50];
        checks.push_back({label + " fails to stabilize (rms grows)", grew,
                          "rms[50] " + fmt4(cstats.rms[50]) + " rms[100] " +
                              fmt4(cstats.rms[100])});
    };
    divergence_check(F_pp, "pole placement gain");
    if (nominal.stabilizable) divergence_check(nominal.F, "nominal gain");

    // Summary table.
    std::ostringstream summary;
    summary << log.str();
    int failed = 0;
    for (const auto& c : checks) {
        summary << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
        if (!c.pass) ++failed;
    }
    summary << (failed == 0 ? "all checks passed\n"
                            : std::to_string(failed) + " checks failed\n");
    write_text_atomic(ctx.out_dir / "summary.txt", summary.str());
    std::cout << summary.str();
    return kExitOk;
}

}  // namespace

CliOptions apply_env_overrides(CliOptions opts) {
    const auto env = [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    };
    try {
        if (!opts.seed)
            if (const auto v = env("RDS_SEED")) opts.seed = std::stoull(*v);
        if (!opts.paths)
            if (const auto v = env("RDS_PATHS")) opts.paths = std::stoi(*v);
        if (!opts.out)
            if (const auto v = env("RDS_OUT")) opts.out = *v;
        if (!opts.lambda_max)
            if (const auto v = env("RDS_LAMBDA_MAX")) opts.lambda_max = std::stod(*v);
        if (const auto v = env("RDS_NO_PLOTS"))
            opts.no_plots = opts.no_plots || *v == "1" || *v == "true";
    } catch (const std::exception&) {
        throw ConfigError("malformed RDS_* environment override");
    }
    return opts;
}

int cmd_identify(const CliOptions& opts) { return run_command("identify", identify_body, opts); }
int cmd_synthesize(const CliOptions& opts) {
    return run_command("synthesize", synthesize_body, opts);
}
int cmd_analyze(const CliOptions& opts) { return run_command("analyze", analyze_body, opts); }
int cmd_simulate(const CliOptions& opts) { return run_command("simulate", simulate_body, opts); }
int cmd_reproduce_paper(const CliOptions& opts) {
    return run_command("reproduce-paper", reproduce_body, opts);
}
int cmd_plot(const CliOptions& opts) { return run_command("plot", plot_body, opts); }

std::string recognized_keys_help() {
    std::string out = "Recognized config keys:\n";
    for (const auto& [section, keys] : config_schema()) {
        out += "  [" + section + "]";
        for (const auto& key : keys) out += " " + key;
        out += "\n";
    }
    out += "Environment overrides: RDS_SEED, RDS_PATHS, RDS_OUT, RDS_LAMBDA_MAX, RDS_NO_PLOTS\n";
    return out;
}

}  // namespace rds
