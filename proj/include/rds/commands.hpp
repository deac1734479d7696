#pragma once

// Command implementations behind the CLI. Each command is a pure function of
// (config file, flag overrides, seeds) to output files under the output
// directory; exit codes are 0 success, 2 usage/config error, 3 infeasible or
// not stabilizable, 4 numerical failure, 5 simulation divergence.

#include <filesystem>
#include <optional>
#include <string>

namespace rds {

struct CliOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<std::filesystem::path> out;
    std::optional<double> lambda_max;
    bool no_plots = false;
};

// Environment overrides (RDS_SEED, RDS_PATHS, RDS_OUT, RDS_LAMBDA_MAX,
// RDS_NO_PLOTS) fill any option not already set by a flag.
CliOptions apply_env_overrides(CliOptions opts);

int cmd_identify(const CliOptions& opts);
int cmd_synthesize(const CliOptions& opts);
int cmd_analyze(const CliOptions& opts);
int cmd_simulate(const CliOptions& opts);
int cmd_reproduce_paper(const CliOptions& opts);
int cmd_plot(const CliOptions& opts);

// Every recognized config section and key, for --help.
std::string recognized_keys_help();

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitDivergence = 5;

}  // namespace rds
