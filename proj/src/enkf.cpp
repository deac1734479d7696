#include "rds/enkf.hpp"

#include <cmath>

#include "rds/linalg.hpp"
#include "rds/random.hpp"

namespace rds {

SimulationModel SimulationModel::make(Index state_dim, Index output_dim,
                                      std::function<Vector(const Vector&, const Vector&)> f,
                                      std::function<Vector(const Vector&, const Vector&)> h,
                                      Matrix Q, Matrix R) {
    require(state_dim > 0 && output_dim > 0, "SimulationModel: dimensions must be positive");
    require(Q.rows() == state_dim && Q.cols() == state_dim, "SimulationModel: Q has wrong size");
    require(R.rows() == output_dim && R.cols() == output_dim, "SimulationModel: R has wrong size");
    SimulationModel model;
    model.state_dim = state_dim;
    model.output_dim = output_dim;
    model.f = std::move(f);
    model.h = std::move(h);
    model.noise_factor_q = psd_factor(Q);
    model.noise_factor_r = psd_factor(R);
    model.Q = std::move(Q);
    model.R = std::move(R);
    return model;
}

Vector Ensemble::mean() const {
    require(!members.empty(), "Ensemble: empty");
    Vector m = Vector::Zero(dim());
    for (const Vector& psi : members) m += psi;
    return m / static_cast<double>(members.size());
}

Ensemble init_ensemble(const Vector& psi0, int members) {
    require(members >= 2, "init_ensemble: need at least 2 members");
    Ensemble ens;
    ens.members.assign(members, psi0);
    return ens;
}

Forecast predict(const Ensemble& ens, const Vector& u, const SimulationModel& model,
                 std::uint64_t step_key) {
    require(ens.size() >= 2, "predict: need at least 2 members");
    Forecast fc;
    fc.ensemble.members.resize(ens.members.size());
    Vector mean = Vector::Zero(model.state_dim);
    for (Index i = 0; i < ens.size(); ++i) {
        NormalStream noise(subkey(step_key, static_cast<std::uint64_t>(i)));
        Vector psi = model.f(ens.members[i], u);
        require(psi.size() == model.state_dim, "predict: f returned wrong dimension");
        psi.noalias() += model.noise_factor_q * noise.take(model.state_dim);
        mean += psi;
        fc.ensemble.members[i] = std::move(psi);
    }
    fc.mean = mean / static_cast<double>(ens.size());
    return fc;
}

OutputEnsemble predict_output(const Ensemble& forecast, const Vector& u,
                              const SimulationModel& model, std::uint64_t step_key) {
    require(forecast.size() >= 2, "predict_output: need at least 2 members");
    OutputEnsemble out;
    out.z_members.resize(forecast.members.size());
    Vector mean = Vector::Zero(model.output_dim);
    for (Index i = 0; i < forecast.size(); ++i) {
        NormalStream noise(subkey(step_key, static_cast<std::uint64_t>(i)));
        Vector z = model.h(forecast.members[i], u);
        require(z.size() == model.output_dim, "predict_output: h returned wrong dimension");
        z.noalias() += model.noise_factor_r * noise.take(model.output_dim);
        mean += z;
        out.z_members[i] = std::move(z);
    }
    out.z_mean = mean / static_cast<double>(forecast.size());
    return out;
}

double default_innovation_regularization(const Matrix& V) {
    return 1e-10 * V.trace() / static_cast<double>(V.rows()) + 1e-12;
}

Ensemble filter_update(const Ensemble& forecast, const OutputEnsemble& out, const Vector& y,
                       std::optional<double> eps_v) {
    const Index M = forecast.size();
    require(M >= 2, "filter_update: need at least 2 members");
    require(static_cast<Index>(out.z_members.size()) == M,
            "filter_update: output ensemble size mismatch");
    const Index p = out.z_mean.size();
    require(y.size() == p, "filter_update: measurement dimension mismatch");

    const Vector psi_mean = forecast.mean();
    Matrix U = Matrix::Zero(forecast.dim(), p);
    Matrix V = Matrix::Zero(p, p);
    for (Index i = 0; i < M; ++i) {
        const Vector dz = out.z_members[i] - out.z_mean;
        U.noalias() += (forecast.members[i] - psi_mean) * dz.transpose();
        V.noalias() += dz * dz.transpose();
    }
    U /= static_cast<double>(M - 1);
    V /= static_cast<double>(M - 1);

    const double eps = eps_v ? *eps_v : default_innovation_regularization(V);
    require(eps >= 0.0, "filter_update: eps_v must be nonnegative");
    const Matrix Vr = V + eps * Matrix::Identity(p, p);

    const EigSym es = eig_sym(Vr);
    const double lmin = es.values.minCoeff();
    const double lmax = es.values.maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e15) {
        throw NumericalError(
            "filter_update: innovation covariance numerically singular (condition estimate " +
            std::to_string(lmax / std::max(lmin, 1e-300)) + ")");
    }
    const Matrix K = Vr.ldlt().solve(U.transpose()).transpose();

    Ensemble filtered;
    filtered.members.resize(M);
    for (Index i = 0; i < M; ++i)
        filtered.members[i] = forecast.members[i] + K * (y - out.z_members[i]);
    return filtered;
}

Vector estimate_state(const Ensemble& ens, Index n) {
    require(n <= ens.dim(), "estimate_state: n exceeds ensemble dimension");
    return ens.mean().head(n);
}

Vector estimate_param(const Ensemble& ens, Index n, Index Z) {
    require(n + Z == ens.dim(), "estimate_param: ensemble dimension must equal n + Z");
    return ens.mean().tail(Z);
}

SimulationModel augmented_model(const RandomLinearSystem& sys, Matrix Q, Matrix R) {
    sys.coeffs.validate();
    const Index n = sys.coeffs.n, Z = sys.coeffs.Z, p = sys.coeffs.p;
    require(Q.rows() == n + Z && Q.cols() == n + Z, "augmented_model: Q must be (n+Z) x (n+Z)");
    require(R.rows() == p && R.cols() == p, "augmented_model: R must be p x p");
    const AffineCoefficients coeffs = sys.coeffs;
    auto f = [coeffs, n, Z](const Vector& psi, const Vector& u) {
        Vector next(n + Z);
        const Vector x = psi.head(n);
        const Vector xi = psi.tail(Z);
        next.head(n) = coeffs.A0 * x + coeffs.B0 * u;
        for (Index j = 0; j < Z; ++j)
            next.head(n).noalias() += xi[j] * (coeffs.A[j] * x + coeffs.B[j] * u);
        next.tail(Z) = xi;
        return next;
    };
    auto h = [coeffs, n, Z](const Vector& psi, const Vector& u) {
        const Vector x = psi.head(n);
        const Vector xi = psi.tail(Z);
        Vector y = coeffs.C0 * x + coeffs.D0 * u;
        for (Index j = 0; j < Z; ++j)
            y.noalias() += xi[j] * (coeffs.C[j] * x + coeffs.D[j] * u);
        return y;
    };
    return SimulationModel::make(n + Z, p, std::move(f), std::move(h), std::move(Q), std::move(R));
}

void write_ensemble_csv(std::ostream& os, const Ensemble& ens) {
    os << "member";
    for (Index j = 0; j < ens.dim(); ++j) os << ",psi_" << (j + 1);
    os << "\n";
    for (Index i = 0; i < ens.size(); ++i) {
        os << i;
        for (Index j = 0; j < ens.dim(); ++j) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", ens.members[i][j]);
            os << ',' << buf;
        }
        os << "\n";
    }
}

}  // namespace rds
