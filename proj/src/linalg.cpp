#include "rds/linalg.hpp"

#include <cmath>

namespace rds {

EigSym eig_sym(const Matrix& S) {
    require(S.rows() == S.cols(), "eig_sym: matrix must be square");
    const double scale = std::max(1.0, S.norm());
    require(asymmetry(S) <= 1e-9 * scale, "eig_sym: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
    if (es.info() != Eigen::Success) throw NumericalError("eig_sym: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix psd_factor(const Matrix& S, double tol) {
    const EigSym es = eig_sym(S);
    const Index n = S.rows();
    const double lmax = n > 0 ? std::max(std::abs(es.values[0]), std::abs(es.values[n - 1])) : 0.0;
    const double floor = -tol * std::max(1.0, lmax);
    Vector root(n);
    for (Index i = 0; i < n; ++i) {
        if (es.values[i] < floor)
            throw std::invalid_argument("psd_factor: matrix has negative eigenvalue " +
                                        std::to_string(es.values[i]));
        root[i] = std::sqrt(std::max(0.0, es.values[i]));
    }
    return es.vectors * root.asDiagonal();
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

}  // namespace rds
