#pragma once

// State-feedback synthesis for second-moment exponential stability.
//
// The Gram matrix of [row(A), row(B)] is factored as Gbar^T Gbar with
// rank nbar; stacking the column blocks of Gbar gives GpA, GpB, and the
// decay rate lambda is certified through the block LMI
//
//   [ lambda^2 X            (GpA X + GpB Y)^T ]
//   [ GpA X + GpB Y         X (x) I_nbar      ]  >= 0,   X >= I,
//
// bisected over lambda^2; the stabilizing gain is F = Y X^{-1}. The same
// factor analyzes a fixed gain F through the equivalent P-form
// lambda^2 P - Abar'^T (P (x) I_nbar) Abar' >= 0 with Abar' = GpA + GpB F.

#include <vector>

#include "rds/sdp.hpp"
#include "rds/system.hpp"
#include "rds/types.hpp"

namespace rds {

struct GramFactor {
    Index n = 0, m = 0, nbar = 0;
    Matrix Gbar;  // nbar x (n+m)n, Gbar^T Gbar reproduces the Gram
    Matrix GpA;   // n*nbar x n, stacked A column blocks
    Matrix GpB;   // n*nbar x m, stacked B column blocks
};

struct BisectionPoint {
    double lambda = 0.0;
    bool feasible = false;
};

struct SynthesisResult {
    bool stabilizable = false;
    double lambda_star = 1.0;
    Matrix X, Y, F;
    std::vector<BisectionPoint> trace;
};

struct AnalysisResult {
    bool bounded = false;
    double lambda_star = 0.0;
    Matrix P;
    std::vector<BisectionPoint> trace;
};

struct SynthesisOptions {
    double lambda_lo = 1e-4;
    double lambda_hi = 1.0 - 1e-6;
    double tol_lambda_sq = 1e-5;
    double feas_margin = 1e-8;
    // Conditioning floor: the solver searches X with cond(X) <= 1/cond_floor.
    // Keeps every bisection subproblem bounded and certifiable.
    double cond_floor = 1e-6;
    SdpOptions sdp;
};

struct AnalysisOptions {
    double lambda_lo = 1e-4;
    double lambda_max = 10.0;
    double tol_lambda_sq = 1e-5;
    double feas_margin = 1e-8;
    double cond_floor = 1e-6;
    SdpOptions sdp;
};

// Keeps eigenpairs above rank_tol * lambda_max; Gbar = sqrt(diag) V^T.
GramFactor factorize_gram(const GramMatrix& gram, double rank_tol = 1e-9);

// The literal affine map over (X packed as diag then upper off-diagonal
// entries, then Y row-major): diag(block LMI above, X - I).
AffineMatrixMap build_synthesis_lmi(const GramFactor& factor, double lambda);

// Affine map over P (same packing) of diag(lambda^2 P - Abar'^T (P (x) I) Abar', P - I).
AffineMatrixMap build_analysis_lmi(const GramFactor& factor, const Matrix& F, double lambda);

// Abar' = GpA + GpB F.
Matrix closed_loop_row_factor(const GramFactor& factor, const Matrix& F);

// Bisection on lambda^2 over (lambda_lo, lambda_hi); returns the smallest
// certified-feasible lambda, the witness (X, Y) rescaled so X >= I, and
// F = Y X^{-1}. stabilizable is false when lambda_hi itself is infeasible.
SynthesisResult synthesize(const GramFactor& factor, const SynthesisOptions& opts = {});

// Minimal lambda in (0, lambda_max] for which a fixed F admits a certificate P.
AnalysisResult analyze(const GramFactor& factor, const Matrix& F, const AnalysisOptions& opts = {});

// Ackermann gain for a SISO pair: eig(A + b F) equals the requested poles.
// Poles must be real or closed under conjugation.
Matrix pole_place_siso(const Matrix& A, const Matrix& b, const std::vector<double>& poles);

// Packing helpers shared by the LMI builders and their tests.
Index sym_var_count(Index n);
Matrix sym_basis_matrix(Index n, Index k);
Matrix unpack_symmetric(const Vector& v, Index n);
Vector pack_symmetric(const Matrix& X);

}  // namespace rds
