#include "rds/simulate.hpp"

#include <cmath>
#include <future>
#include <thread>

#include "rds/random.hpp"

namespace rds {

namespace {

constexpr std::uint64_t kTagPlant = 0x70;
constexpr std::uint64_t kTagFilter = 0x66;
constexpr std::uint64_t kTagPredict = 1;
constexpr std::uint64_t kTagOutput = 2;
constexpr std::uint64_t kTagJitter = 3;

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

ControllerState init_controller(const ControllerConfig& cfg, std::uint64_t path_seed) {
    cfg.sys.coeffs.validate();
    require(cfg.F.rows() == cfg.sys.coeffs.m && cfg.F.cols() == cfg.sys.coeffs.n,
            "ControllerConfig: F has wrong size");
    require(cfg.psi0.size() == cfg.sys.coeffs.n + cfg.sys.coeffs.Z,
            "ControllerConfig: psi0 has wrong size");
    ControllerState state;
    state.key = subkey(path_seed, kTagFilter, cfg.enkf.seed);
    state.ensemble = init_ensemble(cfg.psi0, cfg.enkf.members);
    if (cfg.enkf.init_jitter > 0.0) {
        for (Index i = 0; i < state.ensemble.size(); ++i) {
            NormalStream noise(subkey(state.key, kTagJitter, static_cast<std::uint64_t>(i)));
            state.ensemble.members[i] += cfg.enkf.init_jitter * noise.take(cfg.psi0.size());
        }
    }
    state.u_prev = Vector::Zero(cfg.sys.coeffs.m);
    state.k = 0;
    return state;
}

StepRecord closed_loop_step(Plant& plant, ControllerState& state, const ControllerConfig& cfg,
                            const SimulationModel& model, const Vector& d_k,
                            bool log_true_state) {
    const Index n = cfg.sys.coeffs.n, Z = cfg.sys.coeffs.Z;
    const std::uint64_t k64 = static_cast<std::uint64_t>(state.k);

    const Forecast fc =
        predict(state.ensemble, state.u_prev, model, subkey(state.key, k64, kTagPredict));
    const Vector x_hat = fc.mean.head(n);
    const Vector u = cfg.F * x_hat;
    const Vector applied = u + d_k;
    const Vector filter_input = cfg.filter_sees_external_input ? applied : u;

    const OutputEnsemble out =
        predict_output(fc.ensemble, filter_input, model, subkey(state.key, k64, kTagOutput));

    StepRecord rec;
    if (log_true_state) rec.true_state = plant.true_state();
    const Vector y = plant.step(applied);
    state.ensemble = filter_update(fc.ensemble, out, y, cfg.enkf.eps_v);

    rec.u_applied = applied;
    rec.y = y;
    rec.x_estimate = x_hat;
    rec.xi_estimate = estimate_param(state.ensemble, n, Z);
    state.u_prev = filter_input;
    ++state.k;

    if (!all_finite(rec.u_applied) || !all_finite(rec.y))
        throw DivergenceError("closed loop produced non-finite values", state.k - 1);
    return rec;
}

Trajectory run_closed_loop(Plant& plant, const ControllerConfig& cfg, const SimulationConfig& sim,
                           std::uint64_t path_seed) {
    require(sim.horizon >= 1, "run_closed_loop: horizon must be positive");
    require(static_cast<long>(sim.d.size()) >= sim.horizon,
            "run_closed_loop: external input shorter than horizon");
    plant.reset(subkey(path_seed, kTagPlant));
    const SimulationModel model = augmented_model(cfg.sys, cfg.Q, cfg.R);
    ControllerState state = init_controller(cfg, path_seed);

    Trajectory traj;
    traj.u_applied.reserve(static_cast<size_t>(sim.horizon));
    for (long k = 0; k < sim.horizon; ++k) {
        StepRecord rec = closed_loop_step(plant, state, cfg, model, sim.d[static_cast<size_t>(k)],
                                          sim.log_true_state);
        traj.u_applied.push_back(std::move(rec.u_applied));
        traj.y.push_back(std::move(rec.y));
        traj.x_estimate.push_back(std::move(rec.x_estimate));
        traj.xi_estimate.push_back(std::move(rec.xi_estimate));
        if (sim.log_true_state) traj.true_state.push_back(std::move(rec.true_state));
    }
    return traj;
}

Trajectory run_open_loop(Plant& plant, const std::vector<Vector>& d, long horizon,
                         std::uint64_t path_seed) {
    require(horizon >= 1, "run_open_loop: horizon must be positive");
    require(static_cast<long>(d.size()) >= horizon, "run_open_loop: input shorter than horizon");
    plant.reset(subkey(path_seed, kTagPlant));
    Trajectory traj;
    for (long k = 0; k < horizon; ++k) {
        traj.true_state.push_back(plant.true_state());
        Vector y = plant.step(d[static_cast<size_t>(k)]);
        if (!all_finite(y)) throw DivergenceError("open loop produced non-finite values", k);
        traj.u_applied.push_back(d[static_cast<size_t>(k)]);
        traj.y.push_back(std::move(y));
    }
    return traj;
}

MonteCarloStats monte_carlo(const RunSpec& spec, int n_paths, std::uint64_t base_seed) {
    require(n_paths >= 1, "monte_carlo: need at least one path");
    require(spec.make_plant != nullptr, "monte_carlo: missing plant factory");
    const long K = spec.sim.horizon;

    MonteCarloStats stats;
    stats.n_paths = n_paths;
    stats.path_seeds.resize(static_cast<size_t>(n_paths));
    for (int i = 0; i < n_paths; ++i)
        stats.path_seeds[static_cast<size_t>(i)] = subkey(base_seed, static_cast<std::uint64_t>(i));
    stats.path_norms = Matrix::Zero(n_paths, K);
    if (spec.sim.keep_trajectories) stats.trajectories.resize(static_cast<size_t>(n_paths));
    std::vector<std::string> errors(static_cast<size_t>(n_paths));

    auto run_path = [&](int i) {
        const std::uint64_t seed = stats.path_seeds[static_cast<size_t>(i)];
        try {
            std::unique_ptr<Plant> plant = spec.make_plant();
            SimulationConfig sim = spec.sim;
            sim.log_true_state = true;  // rms needs the logging channel
            Trajectory traj = spec.controller
                                  ? run_closed_loop(*plant, *spec.controller, sim, seed)
                                  : run_open_loop(*plant, sim.d, sim.horizon, seed);
            for (long k = 0; k < K; ++k)
                stats.path_norms(i, k) = traj.true_state[static_cast<size_t>(k)].norm();
            if (spec.sim.keep_trajectories)
                stats.trajectories[static_cast<size_t>(i)] = std::move(traj);
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(i)] = e.what();
        }
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = static_cast<int>(std::min<unsigned>(std::max(1u, hw), 8));
    if (workers > 1 && n_paths > 1) {
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w]() {
                for (int i = w; i < n_paths; i += workers) run_path(i);
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (int i = 0; i < n_paths; ++i) run_path(i);
    }

    int ok = 0;
    stats.rms.assign(static_cast<size_t>(K), 0.0);
    for (int i = 0; i < n_paths; ++i) {
        if (!errors[static_cast<size_t>(i)].empty()) {
            stats.failures.push_back(
                {i, stats.path_seeds[static_cast<size_t>(i)], errors[static_cast<size_t>(i)]});
            continue;
        }
        ++ok;
        for (long k = 0; k < K; ++k)
            stats.rms[static_cast<size_t>(k)] += stats.path_norms(i, k) * stats.path_norms(i, k);
    }
    if (ok == 0) throw NumericalError("monte_carlo: every path failed");
    for (double& r : stats.rms) r = std::sqrt(r / static_cast<double>(ok));
    return stats;
}

double convergence_rate(const MonteCarloStats& stats, long k1, long k2) {
    require(k1 >= 0 && k1 < k2 && k2 < static_cast<long>(stats.rms.size()),
            "convergence_rate: need 0 <= k1 < k2 < horizon");
    const double r1 = stats.rms[static_cast<size_t>(k1)];
    const double r2 = stats.rms[static_cast<size_t>(k2)];
    require(r1 > 0.0, "convergence_rate: rms[k1] is zero");
    return std::pow(r2 / r1, 1.0 / static_cast<double>(k2 - k1));
}

}  // namespace rds
