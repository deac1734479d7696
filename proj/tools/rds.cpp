// Command-line front end: identification, gain synthesis, analysis,
// Monte Carlo simulation, the bundled benchmark reproduction, and plots.

#include <CLI11.hpp>

#include "rds/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Distribution modeling and stabilization toolkit for random linear systems"};
    app.footer(rds::recognized_keys_help());
    app.require_subcommand(1);

    rds::CliOptions opts;
    std::string config, out;
    long long seed = -1;
    int paths = -1;
    double lambda_max = -1.0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "Configuration file");
        cmd->add_option("--seed", seed, "Seed override");
        cmd->add_option("--paths", paths, "Number of Monte Carlo paths");
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--lambda-max", lambda_max, "Analysis search upper bound");
        cmd->add_flag("--no-plots", opts.no_plots, "Skip SVG plot emission");
        return cmd;
    };

    add_common(app.add_subcommand("identify", "Run the identification experiment"));
    add_common(app.add_subcommand("synthesize", "Design a stabilizing gain"));
    add_common(app.add_subcommand("analyze", "Certify a decay rate for a fixed gain"));
    add_common(app.add_subcommand("simulate", "Run the closed loop over sample paths"));
    add_common(app.add_subcommand("reproduce-paper", "Run the bundled benchmark end to end"));
    add_common(app.add_subcommand("plot", "Emit plots from existing CSV outputs"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rds::kExitConfig;
    }

    if (!config.empty()) opts.config = config;
    if (seed >= 0) opts.seed = static_cast<std::uint64_t>(seed);
    if (paths >= 0) opts.paths = paths;
    if (!out.empty()) opts.out = out;
    if (lambda_max > 0.0) opts.lambda_max = lambda_max;
    opts = rds::apply_env_overrides(opts);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "identify") return rds::cmd_identify(opts);
    if (name == "synthesize") return rds::cmd_synthesize(opts);
    if (name == "analyze") return rds::cmd_analyze(opts);
    if (name == "simulate") return rds::cmd_simulate(opts);
    if (name == "reproduce-paper") return rds::cmd_reproduce_paper(opts);
    if (name == "plot") return rds::cmd_plot(opts);
    return rds::kExitConfig;
}
