#pragma once

// Ensemble Kalman filter over a pluggable simulation model
//
//   psi_k = f(psi_{k-1}, u_{k-1}) + w_k,   w_k ~ N(0, Q)
//   z_k   = h(psi_k, u_k) + v_k,           v_k ~ N(0, R)
//
// with the sample-covariance gain K = U V^{-1} applied per member against the
// single measured output. The augmented model stacks the system state with
// the unknown parameter vector, psi = [x; xi], so the same filter does joint
// state/parameter estimation.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "rds/system.hpp"
#include "rds/types.hpp"

namespace rds {

struct SimulationModel {
    Index state_dim = 0;
    Index output_dim = 0;
    std::function<Vector(const Vector& psi, const Vector& u)> f;
    std::function<Vector(const Vector& psi, const Vector& u)> h;
    Matrix Q, R;
    // Cached PSD factors of Q and R used when drawing noise.
    Matrix noise_factor_q, noise_factor_r;

    static SimulationModel make(Index state_dim, Index output_dim,
                                std::function<Vector(const Vector&, const Vector&)> f,
                                std::function<Vector(const Vector&, const Vector&)> h,
                                Matrix Q, Matrix R);
};

struct Ensemble {
    std::vector<Vector> members;

    Index size() const { return static_cast<Index>(members.size()); }
    Index dim() const { return members.empty() ? 0 : members.front().size(); }
    Vector mean() const;
};

struct EnkfConfig {
    int members = 300;
    std::uint64_t seed = 0;
    // Innovation covariance regularization; unset means the adaptive default
    // 1e-10 * trace(V)/p + 1e-12 computed per update.
    std::optional<double> eps_v;
    // Standard deviation of an optional initial spread around psi0 (off by default).
    double init_jitter = 0.0;
};

struct OutputEnsemble {
    std::vector<Vector> z_members;
    Vector z_mean;
};

struct Forecast {
    Ensemble ensemble;
    Vector mean;
};

// All members start at psi0; spread develops through process noise.
Ensemble init_ensemble(const Vector& psi0, int members);

// Maps every member through f with the given input and perturbs it with an
// independent N(0, Q) draw; per-member substreams come from (step_key, member).
Forecast predict(const Ensemble& ens, const Vector& u, const SimulationModel& model,
                 std::uint64_t step_key);

OutputEnsemble predict_output(const Ensemble& forecast, const Vector& u,
                              const SimulationModel& model, std::uint64_t step_key);

// K = U (V + eps_v I)^{-1}; the same measured y is used against every
// perturbed member output. eps_v unset selects the adaptive default.
Ensemble filter_update(const Ensemble& forecast, const OutputEnsemble& out, const Vector& y,
                       std::optional<double> eps_v);

double default_innovation_regularization(const Matrix& V);

// Mean of the first n components (state part of psi = [x; xi]).
Vector estimate_state(const Ensemble& ens, Index n);
// Mean of the trailing Z components (parameter part); requires dim == n + Z.
Vector estimate_param(const Ensemble& ens, Index n, Index Z);

// Simulation model for psi = [x; xi]: f = [A(xi)x + B(xi)u; xi],
// h = C(xi)x + D(xi)u.
SimulationModel augmented_model(const RandomLinearSystem& sys, Matrix Q, Matrix R);

// One row per member, for debugging.
void write_ensemble_csv(std::ostream& os, const Ensemble& ens);

}  // namespace rds
