#pragma once

// Output-feedback closed loop: a four-phase controller cycle per sample
// (state prediction, control decision u_k = F x_{k|k-1}, output prediction,
// filtering against the measured plant output), plus Monte Carlo evaluation
// of the plant-state second moment across independent sample paths.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "rds/enkf.hpp"
#include "rds/plant.hpp"
#include "rds/types.hpp"

namespace rds {

struct ControllerConfig {
    Matrix F;  // m x n state-feedback gain applied to the one-step prediction
    EnkfConfig enkf;
    Matrix Q, R;
    RandomLinearSystem sys;  // the controller's internal model
    Vector psi0;             // initial augmented state [x; xi]
    // When false the filter is driven by F x_{k|k-1} only, excluding the
    // external input d_k from its input channel (sensitivity studies).
    bool filter_sees_external_input = true;
};

struct SimulationConfig {
    long horizon = 0;
    std::vector<Vector> d;  // external input added on u_k; length >= horizon
    bool log_true_state = true;
    bool keep_trajectories = false;
};

struct Trajectory {
    std::vector<Vector> u_applied, y, x_estimate, xi_estimate, true_state;
    long length() const { return static_cast<long>(u_applied.size()); }
};

struct ControllerState {
    Ensemble ensemble;
    Vector u_prev;
    long k = 0;
    std::uint64_t key = 0;
};

struct StepRecord {
    Vector u_applied, y, x_estimate, xi_estimate, true_state;
};

ControllerState init_controller(const ControllerConfig& cfg, std::uint64_t path_seed);

// One Fig.-style cycle: predict with the previous applied input, decide
// u_k = F x_{k|k-1}, apply u_k + d_k to the plant, filter against y_k.
StepRecord closed_loop_step(Plant& plant, ControllerState& state, const ControllerConfig& cfg,
                            const SimulationModel& model, const Vector& d_k, bool log_true_state);

Trajectory run_closed_loop(Plant& plant, const ControllerConfig& cfg, const SimulationConfig& sim,
                           std::uint64_t path_seed);

// Drives the plant with d alone (no feedback).
Trajectory run_open_loop(Plant& plant, const std::vector<Vector>& d, long horizon,
                         std::uint64_t path_seed);

using PlantFactory = std::function<std::unique_ptr<Plant>()>;

struct RunSpec {
    PlantFactory make_plant;
    std::optional<ControllerConfig> controller;  // open loop when absent
    SimulationConfig sim;
};

struct PathFailure {
    int path = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct MonteCarloStats {
    std::vector<double> rms;  // rms[k] = sqrt(mean over paths of |q_k|^2)
    int n_paths = 0;
    std::vector<std::uint64_t> path_seeds;
    Matrix path_norms;  // n_paths x horizon, |q_k| per path
    std::vector<PathFailure> failures;
    std::vector<Trajectory> trajectories;  // kept only on request
};

// N independent paths with seeds derived from (base_seed, path index);
// aggregation is order-independent and deterministic.
MonteCarloStats monte_carlo(const RunSpec& spec, int n_paths, std::uint64_t base_seed);

// (rms[k2] / rms[k1])^(1/(k2-k1)).
double convergence_rate(const MonteCarloStats& stats, long k1, long k2);

}  // namespace rds
