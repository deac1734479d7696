#pragma once

// Small dense helpers shared across the toolkit.

#include "rds/types.hpp"

namespace rds {

inline Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

inline double asymmetry(const Matrix& S) {
    return (S - S.transpose()).norm();
}

struct EigSym {
    Vector values;   // ascending
    Matrix vectors;  // orthonormal columns, S * vectors = vectors * diag(values)
};

// Symmetric eigendecomposition. Throws std::invalid_argument when the input
// is asymmetric beyond 1e-9 relative.
EigSym eig_sym(const Matrix& S);

// Factor L with L L^T = S for a symmetric PSD S; eigenvalues below
// -tol*max(1,|lambda|_max) are an error, small negatives are clamped to zero.
Matrix psd_factor(const Matrix& S, double tol = 1e-10);

Matrix kron(const Matrix& A, const Matrix& B);

}  // namespace rds
