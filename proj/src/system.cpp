#include "rds/system.hpp"

#include <cmath>

#include "rds/linalg.hpp"
#include "rds/random.hpp"

namespace rds {

namespace {

void check_moment_dims(const Vector& mean, const Matrix& covariance) {
    require(mean.size() >= 1, "DistributionModel: dimension must be positive");
    require(covariance.rows() == mean.size() && covariance.cols() == mean.size(),
            "DistributionModel: covariance dimensions do not match mean");
}

// Sample mean and unbiased covariance.
std::pair<Vector, Matrix> sample_moments(const std::vector<Vector>& samples) {
    require(!samples.empty(), "DistributionModel: sample list is empty");
    const Index Z = samples.front().size();
    Vector mean = Vector::Zero(Z);
    for (const Vector& s : samples) {
        require(s.size() == Z, "DistributionModel: inconsistent sample dimensions");
        mean += s;
    }
    mean /= static_cast<double>(samples.size());
    Matrix cov = Matrix::Zero(Z, Z);
    if (samples.size() > 1) {
        for (const Vector& s : samples) cov += (s - mean) * (s - mean).transpose();
        cov /= static_cast<double>(samples.size() - 1);
    }
    return {std::move(mean), std::move(cov)};
}

}  // namespace

DistributionModel DistributionModel::from_moments(Vector mean, Matrix covariance) {
    check_moment_dims(mean, covariance);
    DistributionModel model;
    model.dim = mean.size();
    model.mean = std::move(mean);
    model.covariance = std::move(covariance);
    model.validate();
    return model;
}

DistributionModel DistributionModel::from_samples(std::vector<Vector> samples) {
    auto [mean, cov] = sample_moments(samples);
    DistributionModel model;
    model.dim = mean.size();
    model.mean = std::move(mean);
    model.covariance = std::move(cov);
    model.samples = std::move(samples);
    model.validate();
    return model;
}

void DistributionModel::validate() const {
    check_moment_dims(mean, covariance);
    require(dim == mean.size(), "DistributionModel: dim field does not match mean");
    const double scale = std::max(1.0, covariance.norm());
    require(asymmetry(covariance) <= 1e-9 * scale, "DistributionModel: covariance is not symmetric");
    const EigSym es = eig_sym(covariance);
    require(es.values.minCoeff() >= -1e-10 * std::max(1.0, es.values.cwiseAbs().maxCoeff()),
            "DistributionModel: covariance is not PSD");
    if (samples) {
        const auto [smean, scov] = sample_moments(*samples);
        require((smean - mean).norm() <= 1e-9 * std::max(1.0, mean.norm()),
                "DistributionModel: stored mean does not match samples");
        require((scov - covariance).norm() <= 1e-9 * scale,
                "DistributionModel: stored covariance does not match samples");
    }
}

AffineCoefficients AffineCoefficients::zero(Index n, Index m, Index p, Index Z) {
    AffineCoefficients c;
    c.n = n;
    c.m = m;
    c.p = p;
    c.Z = Z;
    c.A0 = Matrix::Zero(n, n);
    c.B0 = Matrix::Zero(n, m);
    c.C0 = Matrix::Zero(p, n);
    c.D0 = Matrix::Zero(p, m);
    c.A.assign(Z, Matrix::Zero(n, n));
    c.B.assign(Z, Matrix::Zero(n, m));
    c.C.assign(Z, Matrix::Zero(p, n));
    c.D.assign(Z, Matrix::Zero(p, m));
    return c;
}

void AffineCoefficients::validate() const {
    require(n > 0 && m > 0 && p > 0 && Z > 0, "AffineCoefficients: dimensions must be positive");
    auto check = [&](const Matrix& M, Index r, Index c, const char* what) {
        require(M.rows() == r && M.cols() == c,
                std::string("AffineCoefficients: bad dimensions for ") + what);
    };
    check(A0, n, n, "A0");
    check(B0, n, m, "B0");
    check(C0, p, n, "C0");
    check(D0, p, m, "D0");
    require(static_cast<Index>(A.size()) == Z && static_cast<Index>(B.size()) == Z &&
                static_cast<Index>(C.size()) == Z && static_cast<Index>(D.size()) == Z,
            "AffineCoefficients: coefficient lists must have length Z");
    for (Index j = 0; j < Z; ++j) {
        check(A[j], n, n, "A_j");
        check(B[j], n, m, "B_j");
        check(C[j], p, n, "C_j");
        check(D[j], p, m, "D_j");
    }
}

CoefficientValue eval_coeff(const AffineCoefficients& coeffs, const Vector& xi) {
    require(xi.size() == coeffs.Z, "eval_coeff: xi has wrong length");
    CoefficientValue v{coeffs.A0, coeffs.B0, coeffs.C0, coeffs.D0};
    for (Index j = 0; j < coeffs.Z; ++j) {
        v.A.noalias() += xi[j] * coeffs.A[j];
        v.B.noalias() += xi[j] * coeffs.B[j];
        v.C.noalias() += xi[j] * coeffs.C[j];
        v.D.noalias() += xi[j] * coeffs.D[j];
    }
    return v;
}

Vector step(const RandomLinearSystem& sys, const Vector& x, const Vector& u, const Vector& xi) {
    const AffineCoefficients& c = sys.coeffs;
    require(x.size() == c.n && u.size() == c.m && xi.size() == c.Z, "step: dimension mismatch");
    Vector next = c.A0 * x + c.B0 * u;
    for (Index j = 0; j < c.Z; ++j) next.noalias() += xi[j] * (c.A[j] * x + c.B[j] * u);
    return next;
}

Vector output(const RandomLinearSystem& sys, const Vector& x, const Vector& u, const Vector& xi) {
    const AffineCoefficients& c = sys.coeffs;
    require(x.size() == c.n && u.size() == c.m && xi.size() == c.Z, "output: dimension mismatch");
    Vector y = c.C0 * x + c.D0 * u;
    for (Index j = 0; j < c.Z; ++j) y.noalias() += xi[j] * (c.C[j] * x + c.D[j] * u);
    return y;
}

Vector row_vector(const Matrix& A, const Matrix& B) {
    const Index n = A.rows(), m = B.cols();
    require(A.cols() == n && B.rows() == n, "row_vector: A must be n x n and B n x m");
    Vector r((n + m) * n);
    for (Index i = 0; i < n; ++i) r.segment(i * n, n) = A.row(i).transpose();
    for (Index i = 0; i < n; ++i) r.segment(n * n + i * m, m) = B.row(i).transpose();
    return r;
}

void unrow_vector(const Vector& r, Index n, Index m, Matrix& A, Matrix& B) {
    require(r.size() == (n + m) * n, "unrow_vector: length does not match dimensions");
    A.resize(n, n);
    B.resize(n, m);
    for (Index i = 0; i < n; ++i) A.row(i) = r.segment(i * n, n).transpose();
    for (Index i = 0; i < n; ++i) B.row(i) = r.segment(n * n + i * m, m).transpose();
}

GramMatrix gram_closed_form(const AffineCoefficients& coeffs, const DistributionModel& model) {
    coeffs.validate();
    require(model.dim == coeffs.Z, "gram_closed_form: model dimension does not match coefficients");
    model.validate();

    const Vector r0 = row_vector(coeffs.A0, coeffs.B0);
    std::vector<Vector> rj(coeffs.Z);
    for (Index j = 0; j < coeffs.Z; ++j) rj[j] = row_vector(coeffs.A[j], coeffs.B[j]);

    Matrix G = r0 * r0.transpose();
    for (Index j = 0; j < coeffs.Z; ++j) {
        G.noalias() += model.mean[j] * (r0 * rj[j].transpose() + rj[j] * r0.transpose());
        for (Index l = 0; l < coeffs.Z; ++l) {
            const double second_moment = model.covariance(j, l) + model.mean[j] * model.mean[l];
            G.noalias() += second_moment * (rj[j] * rj[l].transpose());
        }
    }
    return {coeffs.n, coeffs.m, symmetrize(G)};
}

GramMatrix gram_empirical(const AffineCoefficients& coeffs, const std::vector<Vector>& xi_samples) {
    coeffs.validate();
    require(!xi_samples.empty(), "gram_empirical: sample list is empty");
    const Index sz = (coeffs.n + coeffs.m) * coeffs.n;
    Matrix G = Matrix::Zero(sz, sz);
    for (const Vector& xi : xi_samples) {
        const CoefficientValue v = eval_coeff(coeffs, xi);
        const Vector r = row_vector(v.A, v.B);
        G.selfadjointView<Eigen::Lower>().rankUpdate(r);
    }
    G = Matrix(G.selfadjointView<Eigen::Lower>());
    G /= static_cast<double>(xi_samples.size());
    return {coeffs.n, coeffs.m, G};
}

GramMatrix gram_monte_carlo(const AffineCoefficients& coeffs, const DistributionModel& model,
                            long n_samples, std::uint64_t seed) {
    coeffs.validate();
    require(model.dim == coeffs.Z, "gram_monte_carlo: model dimension does not match coefficients");
    require(n_samples >= 1, "gram_monte_carlo: need at least one sample");
    const Matrix L = psd_factor(model.covariance);
    const Index sz = (coeffs.n + coeffs.m) * coeffs.n;
    Matrix G = Matrix::Zero(sz, sz);
    const CounterRng rng(subkey(seed, 0x6d63u));  // "mc"
    Vector z(model.dim);
    for (long s = 0; s < n_samples; ++s) {
        for (Index j = 0; j < model.dim; ++j)
            z[j] = rng.normal(static_cast<std::uint64_t>(s) * model.dim + j);
        const Vector xi = model.mean + L * z;
        const CoefficientValue v = eval_coeff(coeffs, xi);
        const Vector r = row_vector(v.A, v.B);
        G.selfadjointView<Eigen::Lower>().rankUpdate(r);
    }
    G = Matrix(G.selfadjointView<Eigen::Lower>());
    G /= static_cast<double>(n_samples);
    return {coeffs.n, coeffs.m, G};
}

}  // namespace rds
