#pragma once

// Discrete-time linear systems whose coefficients depend affinely on an
// i.i.d. random parameter vector:
//
//   x_{k+1} = A(xi_k) x_k + B(xi_k) u_k,   A(xi) = A0 + sum_j xi_j A_j
//   y_k     = C(xi_k) x_k + D(xi_k) u_k
//
// plus the second-moment Gram matrix of [row(A), row(B)] computed three ways
// (closed form under Gaussian moments, empirical over samples, Monte Carlo).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rds/types.hpp"

namespace rds {

// Mean/covariance model of the parameter vector xi, optionally with the raw
// samples it was estimated from.
struct DistributionModel {
    Index dim = 0;
    Vector mean;
    Matrix covariance;
    std::optional<std::vector<Vector>> samples;

    static DistributionModel from_moments(Vector mean, Matrix covariance);
    // Unbiased sample covariance; keeps the samples.
    static DistributionModel from_samples(std::vector<Vector> samples);

    void validate() const;
};

struct AffineCoefficients {
    Index n = 0, m = 0, p = 0, Z = 0;
    Matrix A0;
    std::vector<Matrix> A;
    Matrix B0;
    std::vector<Matrix> B;
    Matrix C0;
    std::vector<Matrix> C;
    Matrix D0;
    std::vector<Matrix> D;

    // Fills zero blocks for the given dimensions.
    static AffineCoefficients zero(Index n, Index m, Index p, Index Z);
    void validate() const;
};

struct RandomLinearSystem {
    AffineCoefficients coeffs;
    std::string label;
};

struct CoefficientValue {
    Matrix A, B, C, D;
};

// Symmetric PSD matrix of size (n+m)n: E[r^T r] with r = row_vector(A, B).
struct GramMatrix {
    Index n = 0, m = 0;
    Matrix G;
};

CoefficientValue eval_coeff(const AffineCoefficients& coeffs, const Vector& xi);

Vector step(const RandomLinearSystem& sys, const Vector& x, const Vector& u, const Vector& xi);
Vector output(const RandomLinearSystem& sys, const Vector& x, const Vector& u, const Vector& xi);

// Row-major flattening [row_1(A),...,row_n(A), row_1(B),...,row_n(B)].
Vector row_vector(const Matrix& A, const Matrix& B);
// Inverse of row_vector.
void unrow_vector(const Vector& r, Index n, Index m, Matrix& A, Matrix& B);

// E[r(xi)^T r(xi)] evaluated exactly from the model's first two moments.
GramMatrix gram_closed_form(const AffineCoefficients& coeffs, const DistributionModel& model);

// Plain average of r(xi)^T r(xi) over the given samples.
GramMatrix gram_empirical(const AffineCoefficients& coeffs, const std::vector<Vector>& xi_samples);

// Average over n_samples Gaussian draws from the model; deterministic per seed.
GramMatrix gram_monte_carlo(const AffineCoefficients& coeffs, const DistributionModel& model,
                            long n_samples, std::uint64_t seed);

}  // namespace rds
