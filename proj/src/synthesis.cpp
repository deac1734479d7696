#include "rds/synthesis.hpp"

#include <cmath>
#include <complex>
#include <iostream>

#include "rds/linalg.hpp"

namespace rds {

namespace {

void check_factor(const GramFactor& f) {
    require(f.n > 0 && f.m > 0 && f.nbar > 0, "GramFactor: dimensions must be positive");
    require(f.Gbar.rows() == f.nbar && f.Gbar.cols() == (f.n + f.m) * f.n,
            "GramFactor: Gbar has wrong size");
    require(f.GpA.rows() == f.n * f.nbar && f.GpA.cols() == f.n, "GramFactor: GpA has wrong size");
    require(f.GpB.rows() == f.n * f.nbar && f.GpB.cols() == f.m, "GramFactor: GpB has wrong size");
}

// Variables of the synthesis map: X (sym, n(n+1)/2) then Y (m*n row-major).
struct SynthesisPacking {
    Index n, m;
    Index x_vars() const { return sym_var_count(n); }
    Index total() const { return x_vars() + m * n; }
    Matrix unpack_X(const Vector& v) const { return unpack_symmetric(v.head(x_vars()), n); }
    Matrix unpack_Y(const Vector& v) const {
        Matrix Y(m, n);
        Index k = x_vars();
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j) Y(i, j) = v[k++];
        return Y;
    }
};

// Shared assembly of the block map
//   diag([lambda^2 X, *; GpA X + GpB Y, X (x) I_nbar], <extra blocks>)
// where extra encodes either the literal normalization X - I or the
// cond-floored pair (X - theta I, I - X) used inside synthesize().
AffineMatrixMap make_synthesis_map(const GramFactor& f, double lambda, bool floored, double theta) {
    const Index n = f.n, m = f.m, nbar = f.nbar;
    const SynthesisPacking pk{n, m};
    const Index core = n + n * nbar;
    const Index extra = floored ? 2 * n : n;
    const Index sz = core + extra;

    Matrix M0 = Matrix::Zero(sz, sz);
    if (floored) {
        M0.block(core, core, n, n) = -theta * Matrix::Identity(n, n);
        M0.block(core + n, core + n, n, n) = Matrix::Identity(n, n);
    } else {
        M0.block(core, core, n, n) = -Matrix::Identity(n, n);
    }

    std::vector<Matrix> terms;
    terms.reserve(pk.total());
    for (Index k = 0; k < pk.x_vars(); ++k) {
        const Matrix E = sym_basis_matrix(n, k);
        Matrix M = Matrix::Zero(sz, sz);
        M.block(0, 0, n, n) = lambda * lambda * E;
        const Matrix off = f.GpA * E;
        M.block(n, 0, n * nbar, n) = off;
        M.block(0, n, n, n * nbar) = off.transpose();
        M.block(n, n, n * nbar, n * nbar) = kron(E, Matrix::Identity(nbar, nbar));
        M.block(core, core, n, n) = E;
        if (floored) M.block(core + n, core + n, n, n) = -E;
        terms.push_back(std::move(M));
    }
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < n; ++j) {
            Matrix EY = Matrix::Zero(m, n);
            EY(i, j) = 1.0;
            Matrix M = Matrix::Zero(sz, sz);
            const Matrix off = f.GpB * EY;
            M.block(n, 0, n * nbar, n) = off;
            M.block(0, n, n, n * nbar) = off.transpose();
            terms.push_back(std::move(M));
        }
    }
    return AffineMatrixMap(std::move(M0), std::move(terms));
}

// Analysis map over P: diag(lambda^2 P - Abar'^T (P (x) I) Abar', <extra>).
AffineMatrixMap make_analysis_map(const GramFactor& f, const Matrix& Abar, double lambda,
                                  bool floored, double theta) {
    const Index n = f.n, nbar = f.nbar;
    const Index extra = floored ? 2 * n : n;
    const Index sz = n + extra;

    Matrix M0 = Matrix::Zero(sz, sz);
    if (floored) {
        M0.block(n, n, n, n) = -theta * Matrix::Identity(n, n);
        M0.block(2 * n, 2 * n, n, n) = Matrix::Identity(n, n);
    } else {
        M0.block(n, n, n, n) = -Matrix::Identity(n, n);
    }

    std::vector<Matrix> terms;
    const Index q = sym_var_count(n);
    terms.reserve(q);
    for (Index k = 0; k < q; ++k) {
        const Matrix E = sym_basis_matrix(n, k);
        Matrix M = Matrix::Zero(sz, sz);
        M.block(0, 0, n, n) =
            lambda * lambda * E - Abar.transpose() * kron(E, Matrix::Identity(nbar, nbar)) * Abar;
        M.block(n, n, n, n) = E;
        if (floored) M.block(2 * n, 2 * n, n, n) = -E;
        terms.push_back(std::move(M));
    }
    return AffineMatrixMap(std::move(M0), std::move(terms));
}

struct BisectionOutcome {
    bool hi_feasible = false;
    double lambda_star = 0.0;
    Vector witness;
    std::vector<BisectionPoint> trace;
};

// Bisection on lambda^2; keeps the witness of the smallest feasible probe.
BisectionOutcome bisect_lambda(const std::function<AffineMatrixMap(double)>& map_at, double lo,
                               double hi, double tol_sq, double margin, const SdpOptions& sdp) {
    BisectionOutcome out;
    auto probe = [&](double lam) {
        const Feasibility fb = is_feasible(map_at(lam), margin, sdp);
        out.trace.push_back({lam, fb.feasible});
        return fb;
    };
    Feasibility fb = probe(hi);
    if (!fb.feasible) return out;
    out.hi_feasible = true;
    out.lambda_star = hi;
    out.witness = *fb.witness;
    double lo2 = lo * lo, hi2 = hi * hi;
    while (hi2 - lo2 > tol_sq) {
        const double mid = std::sqrt(0.5 * (lo2 + hi2));
        fb = probe(mid);
        if (fb.feasible) {
            hi2 = mid * mid;
            out.lambda_star = mid;
            out.witness = *fb.witness;
        } else {
            lo2 = mid * mid;
        }
    }
    return out;
}

}  // namespace

Index sym_var_count(Index n) { return n * (n + 1) / 2; }

Matrix sym_basis_matrix(Index n, Index k) {
    require(k >= 0 && k < sym_var_count(n), "sym_basis_matrix: index out of range");
    Matrix E = Matrix::Zero(n, n);
    if (k < n) {
        E(k, k) = 1.0;
        return E;
    }
    Index idx = k - n;
    for (Index i = 0; i < n; ++i) {
        const Index row_len = n - i - 1;
        if (idx < row_len) {
            E(i, i + 1 + idx) = 1.0;
            E(i + 1 + idx, i) = 1.0;
            return E;
        }
        idx -= row_len;
    }
    return E;  // unreachable
}

Matrix unpack_symmetric(const Vector& v, Index n) {
    require(v.size() == sym_var_count(n), "unpack_symmetric: wrong length");
    Matrix X = Matrix::Zero(n, n);
    for (Index k = 0; k < v.size(); ++k) X += v[k] * sym_basis_matrix(n, k);
    return X;
}

Vector pack_symmetric(const Matrix& X) {
    const Index n = X.rows();
    Vector v(sym_var_count(n));
    Index k = 0;
    for (Index i = 0; i < n; ++i) v[k++] = X(i, i);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) v[k++] = X(i, j);
    return v;
}

GramFactor factorize_gram(const GramMatrix& gram, double rank_tol) {
    const Index n = gram.n, m = gram.m;
    require(gram.G.rows() == (n + m) * n && gram.G.cols() == (n + m) * n,
            "factorize_gram: Gram size does not match dimensions");
    const EigSym es = eig_sym(gram.G);
    const Index sz = gram.G.rows();
    const double lmax = es.values[sz - 1];
    require(es.values[0] >= -1e-8 * std::max(1.0, std::abs(lmax)),
            "factorize_gram: Gram is not PSD");

    std::vector<Index> kept;
    for (Index i = sz - 1; i >= 0; --i)
        if (es.values[i] > rank_tol * lmax) kept.push_back(i);
    require(!kept.empty(), "factorize_gram: Gram is numerically zero");

    GramFactor f;
    f.n = n;
    f.m = m;
    f.nbar = static_cast<Index>(kept.size());
    f.Gbar.resize(f.nbar, sz);
    for (Index r = 0; r < f.nbar; ++r) {
        Vector row = std::sqrt(es.values[kept[static_cast<size_t>(r)]]) *
                     es.vectors.col(kept[static_cast<size_t>(r)]);
        // Fix the sign so the factor is reproducible.
        Index imax = 0;
        row.cwiseAbs().maxCoeff(&imax);
        if (row[imax] < 0.0) row = -row;
        f.Gbar.row(r) = row.transpose();
    }
    f.GpA.resize(n * f.nbar, n);
    f.GpB.resize(n * f.nbar, m);
    for (Index i = 0; i < n; ++i) {
        f.GpA.block(i * f.nbar, 0, f.nbar, n) = f.Gbar.block(0, i * n, f.nbar, n);
        f.GpB.block(i * f.nbar, 0, f.nbar, m) = f.Gbar.block(0, n * n + i * m, f.nbar, m);
    }
    return f;
}

AffineMatrixMap build_synthesis_lmi(const GramFactor& factor, double lambda) {
    check_factor(factor);
    require(lambda > 0.0, "build_synthesis_lmi: lambda must be positive");
    return make_synthesis_map(factor, lambda, false, 0.0);
}

AffineMatrixMap build_analysis_lmi(const GramFactor& factor, const Matrix& F, double lambda) {
    check_factor(factor);
    require(lambda > 0.0, "build_analysis_lmi: lambda must be positive");
    return make_analysis_map(factor, closed_loop_row_factor(factor, F), lambda, false, 0.0);
}

Matrix closed_loop_row_factor(const GramFactor& factor, const Matrix& F) {
    check_factor(factor);
    require(F.rows() == factor.m && F.cols() == factor.n,
            "closed_loop_row_factor: F has wrong size");
    return factor.GpA + factor.GpB * F;
}

SynthesisResult synthesize(const GramFactor& factor, const SynthesisOptions& opts) {
    check_factor(factor);
    require(opts.lambda_lo > 0.0 && opts.lambda_lo < opts.lambda_hi && opts.lambda_hi < 1.0,
            "synthesize: need 0 < lambda_lo < lambda_hi < 1");
    const SynthesisPacking pk{factor.n, factor.m};

    const BisectionOutcome out = bisect_lambda(
        [&](double lam) { return make_synthesis_map(factor, lam, true, opts.cond_floor); },
        opts.lambda_lo, opts.lambda_hi, opts.tol_lambda_sq, opts.feas_margin, opts.sdp);

    SynthesisResult res;
    res.trace = out.trace;
    if (!out.hi_feasible) return res;  // not second-moment stabilizable within (0,1)

    Matrix X = pk.unpack_X(out.witness);
    Matrix Y = pk.unpack_Y(out.witness);
    const EigSym es = eig_sym(X);
    const double xmin = es.values.minCoeff();
    if (!(xmin > 0.0))
        throw NumericalError("synthesize: witness X is not positive definite");
    const double cond = es.values.maxCoeff() / xmin;
    if (cond > 1e8)
        std::cerr << "synthesize: warning, witness X condition number " << cond << "\n";

    // Rescale so X >= I exactly; feasibility of the homogeneous block is preserved.
    X /= xmin;
    Y /= xmin;
    res.stabilizable = true;
    res.lambda_star = out.lambda_star;
    res.F = X.transpose().ldlt().solve(Y.transpose()).transpose();
    res.X = std::move(X);
    res.Y = std::move(Y);
    return res;
}

AnalysisResult analyze(const GramFactor& factor, const Matrix& F, const AnalysisOptions& opts) {
    check_factor(factor);
    const Matrix Abar = closed_loop_row_factor(factor, F);
    require(opts.lambda_lo > 0.0 && opts.lambda_lo < opts.lambda_max,
            "analyze: need 0 < lambda_lo < lambda_max");

    const BisectionOutcome out = bisect_lambda(
        [&](double lam) { return make_analysis_map(factor, Abar, lam, true, opts.cond_floor); },
        opts.lambda_lo, opts.lambda_max, opts.tol_lambda_sq, opts.feas_margin, opts.sdp);

    AnalysisResult res;
    res.trace = out.trace;
    if (!out.hi_feasible) return res;  // second moment grows faster than lambda_max

    Matrix P = unpack_symmetric(out.witness, factor.n);
    const double pmin = eig_sym(P).values.minCoeff();
    if (!(pmin > 0.0)) throw NumericalError("analyze: witness P is not positive definite");
    P /= pmin;
    res.bounded = true;
    res.lambda_star = out.lambda_star;
    res.P = std::move(P);
    return res;
}

Matrix pole_place_siso(const Matrix& A, const Matrix& b, const std::vector<double>& poles) {
    const Index n = A.rows();
    require(A.cols() == n, "pole_place_siso: A must be square");
    require(b.rows() == n && b.cols() == 1, "pole_place_siso: b must be n x 1");
    require(static_cast<Index>(poles.size()) == n, "pole_place_siso: need exactly n poles");

    Matrix ctrb(n, n);
    Vector col = b.col(0);
    for (Index i = 0; i < n; ++i) {
        ctrb.col(i) = col;
        col = A * col;
    }
    const Eigen::ColPivHouseholderQR<Matrix> qr(ctrb);
    if (qr.rank() < n)
        throw std::invalid_argument("pole_place_siso: pair is uncontrollable, ctrb rank " +
                                    std::to_string(qr.rank()) + " of " + std::to_string(n));

    // Desired characteristic polynomial phi(s) = prod (s - p_i), then Ackermann
    // K = e_n^T C^{-1} phi(A) for u = -K x; return F = -K for u = F x.
    std::vector<double> coeffs{1.0};  // leading coefficient
    for (double pole : poles) {
        std::vector<double> next(coeffs.size() + 1, 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * pole;
        }
        coeffs = std::move(next);
    }
    Matrix phi = Matrix::Zero(n, n);
    for (double c : coeffs) phi = phi * A + c * Matrix::Identity(n, n);

    // e_n^T C^{-1} phi(A) = (C^{-T} e_n)^T phi(A).
    Vector en = Vector::Zero(n);
    en[n - 1] = 1.0;
    const Vector z = ctrb.transpose().colPivHouseholderQr().solve(en);
    return -(z.transpose() * phi);
}

}  // namespace rds
