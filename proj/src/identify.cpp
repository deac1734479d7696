#include "rds/identify.hpp"

#include "rds/random.hpp"

namespace rds {

namespace {

// Stream tags for independent noise inside one experiment step.
constexpr std::uint64_t kTagPredict = 1;
constexpr std::uint64_t kTagOutput = 2;
constexpr std::uint64_t kTagJitter = 3;

Ensemble initial_ensemble(const Vector& psi0, const EnkfConfig& cfg, std::uint64_t key) {
    Ensemble ens = init_ensemble(psi0, cfg.members);
    if (cfg.init_jitter > 0.0) {
        for (Index i = 0; i < ens.size(); ++i) {
            NormalStream noise(subkey(key, kTagJitter, static_cast<std::uint64_t>(i)));
            ens.members[i] += cfg.init_jitter * noise.take(psi0.size());
        }
    }
    return ens;
}

}  // namespace

DistributionModel IdentificationResult::to_model() const {
    DistributionModel model;
    model.dim = mean.size();
    model.mean = mean;
    model.covariance = covariance;
    return model;
}

IdentificationResult identify(Plant& plant, const RandomLinearSystem& sys,
                              const IdentificationConfig& cfg) {
    sys.coeffs.validate();
    const Index n = sys.coeffs.n, m = sys.coeffs.m, Z = sys.coeffs.Z;
    require(plant.input_dim() == m && plant.output_dim() == sys.coeffs.p,
            "identify: plant dimensions do not match the system model");
    require(cfg.k0 >= 0 && cfg.k1 >= 0, "identify: window bounds must be nonnegative");

    const long steps = cfg.k0 + cfg.k1 + 1;
    std::vector<Vector> inputs;
    if (cfg.input_sequence) {
        require(static_cast<long>(cfg.input_sequence->size()) >= steps,
                "identify: input sequence shorter than the experiment");
        inputs.assign(cfg.input_sequence->begin(), cfg.input_sequence->begin() + steps);
        for (const Vector& u : inputs)
            require(u.size() == m, "identify: input sequence dimension mismatch");
    } else {
        const std::vector<int> taps =
            cfg.mls_taps ? *cfg.mls_taps : default_mls_taps(cfg.mls_order);
        const std::vector<double> seq = mls(cfg.mls_order, taps, steps, cfg.input_amplitude);
        inputs.reserve(static_cast<size_t>(steps));
        for (double s : seq) inputs.push_back(Vector::Constant(m, s));
    }

    const SimulationModel model = augmented_model(sys, cfg.Q, cfg.R);
    const std::uint64_t key = subkey(cfg.enkf.seed, 0x1d);
    Ensemble ens = initial_ensemble(Vector::Zero(n + Z), cfg.enkf, key);
    Vector u_prev = Vector::Zero(m);

    IdentificationResult result;
    result.trace.reserve(static_cast<size_t>(steps));
    std::vector<Vector> window;

    for (long k = 0; k < steps; ++k) {
        const Vector& u = inputs[static_cast<size_t>(k)];
        Forecast fc;
        Ensemble filtered;
        try {
            fc = predict(ens, u_prev, model,
                         subkey(key, static_cast<std::uint64_t>(k), kTagPredict));
            const Vector y = plant.step(u);
            const OutputEnsemble out = predict_output(
                fc.ensemble, u, model, subkey(key, static_cast<std::uint64_t>(k), kTagOutput));
            filtered = filter_update(fc.ensemble, out, y, cfg.enkf.eps_v);

            IdentificationTraceRow row;
            row.k = k;
            row.u = u;
            row.y = y;
            row.x_pred = fc.mean.head(n);
            row.xi_filt = estimate_param(filtered, n, Z);
            if (row.x_pred.norm() > cfg.divergence_threshold)
                throw DivergenceError("identify: state prediction diverged", k);
            if (k >= cfg.k0) window.push_back(row.xi_filt);
            result.trace.push_back(std::move(row));
        } catch (const DivergenceError&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericalError("identify: step " + std::to_string(k) + ": " + e.what());
        }
        ens = std::move(filtered);
        u_prev = u;
    }

    // Window statistics: mean, unbiased covariance, empirical Gram.
    const long count = static_cast<long>(window.size());
    Vector mean = Vector::Zero(Z);
    for (const Vector& xi : window) mean += xi;
    mean /= static_cast<double>(count);
    Matrix cov = Matrix::Zero(Z, Z);
    if (count > 1) {
        for (const Vector& xi : window) cov += (xi - mean) * (xi - mean).transpose();
        cov /= static_cast<double>(count - 1);
    } else {
        result.degenerate_window = true;
    }
    result.mean = std::move(mean);
    result.covariance = std::move(cov);
    result.empirical_gram = gram_empirical(sys.coeffs, window);
    return result;
}

}  // namespace rds
