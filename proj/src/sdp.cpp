#include "rds/sdp.hpp"

#include <cmath>
#include <limits>

namespace rds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cholesky that reports failure instead of silently producing NaNs.
bool cholesky(const Matrix& S, Eigen::LLT<Matrix>& llt) {
    llt.compute(S);
    return llt.info() == Eigen::Success;
}

double logdet_from_llt(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

AffineMatrixMap::AffineMatrixMap(Matrix M0, std::vector<Matrix> terms)
    : M0_(std::move(M0)), terms_(std::move(terms)) {
    require(M0_.rows() == M0_.cols(), "AffineMatrixMap: M0 must be square");
    require(!terms_.empty(), "AffineMatrixMap: need at least one variable");
    const auto check = [&](Matrix& M) {
        require(M.rows() == M0_.rows() && M.cols() == M0_.cols(),
                "AffineMatrixMap: term size mismatch");
        require(asymmetry(M) <= 1e-9 * std::max(1.0, M.norm()),
                "AffineMatrixMap: matrix is not symmetric");
        M = symmetrize(M);
    };
    check(M0_);
    for (Matrix& M : terms_) check(M);
}

Matrix AffineMatrixMap::value(const Vector& v) const {
    require(v.size() == vars(), "AffineMatrixMap: variable vector has wrong length");
    Matrix M = M0_;
    for (Index i = 0; i < vars(); ++i) M.noalias() += v[i] * terms_[i];
    return M;
}

SdpResult max_min_eig(const AffineMatrixMap& map, const SdpOptions& opts) {
    const Index s = map.size();
    const Index q = map.vars();
    const double scale = std::max(1.0, map.constant().norm());
    const double gap_tol = opts.gap_tol_rel * scale;
    const double t_unbounded = opts.unbounded_t * scale;

    // Strictly feasible start: v = 0, t one below the smallest eigenvalue.
    Vector v = Vector::Zero(q);
    double t = eig_sym(map.constant()).values.minCoeff() - 1.0;

    SdpResult result;
    result.residual = kInf;
    result.upper_bound = kInf;
    result.status = SdpStatus::IterationLimit;

    double tau = opts.tau0;
    Eigen::LLT<Matrix> llt(s);
    std::vector<Matrix> whitened(q);
    Vector grad(q + 1);
    Matrix hess(q + 1, q + 1);
    double prev_stage_t = -kInf;
    bool stalled = false;

    auto finish = [&](SdpStatus status) {
        result.v_star = v;
        result.t_star = eig_sym(map.value(v)).values.minCoeff();
        result.status = status;
        result.converged = status == SdpStatus::Converged;
        return result;
    };

    for (int stage = 0; stage < opts.max_stages; ++stage) {
        bool centered = false;
        for (int it = 0; it < opts.max_newton; ++it) {
            Matrix S = map.value(v);
            S.diagonal().array() -= t;
            if (!cholesky(S, llt)) return finish(SdpStatus::Stalled);
            const Matrix Linv = llt.matrixL().solve(Matrix::Identity(s, s));

            // Whitened directions: W_i = L^{-1} M_i L^{-T}, W_t = -S^{-1}.
            for (Index i = 0; i < q; ++i)
                whitened[i] = Linv * map.terms()[static_cast<size_t>(i)] * Linv.transpose();
            const Matrix Wt = -(Linv.transpose() * Linv);

            for (Index i = 0; i < q; ++i) grad[i] = -whitened[i].trace();
            grad[q] = -tau - Wt.trace();
            for (Index i = 0; i < q; ++i) {
                for (Index j = i; j < q; ++j)
                    hess(i, j) = hess(j, i) = whitened[i].cwiseProduct(whitened[j]).sum();
                hess(i, q) = hess(q, i) = whitened[i].cwiseProduct(Wt).sum();
            }
            hess(q, q) = Wt.cwiseProduct(Wt).sum();
            const double ridge = 1e-12 * std::max(1.0, hess.diagonal().maxCoeff());
            hess.diagonal().array() += ridge;

            const Vector dir = hess.ldlt().solve(-grad);
            const double decrement_sq = -grad.dot(dir);
            if (!(decrement_sq > 0.0) ||
                decrement_sq <= std::pow(opts.grad_tol * (1.0 + tau), 2)) {
                centered = true;
                break;
            }

            const double phi0 = -tau * t - logdet_from_llt(llt);
            const double slope = grad.dot(dir);
            Matrix dS = Matrix::Zero(s, s);
            for (Index i = 0; i < q; ++i)
                dS.noalias() += dir[i] * map.terms()[static_cast<size_t>(i)];
            dS.diagonal().array() -= dir[q];
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                const double tn = t + alpha * dir[q];
                if (cholesky(S + alpha * dS, llt)) {
                    const double phin = -tau * tn - logdet_from_llt(llt);
                    if (phin <= phi0 + 0.25 * alpha * slope) {
                        v += alpha * dir.head(q);
                        t = tn;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            ++result.iterations;
            if (!accepted) {
                stalled = true;
                break;
            }
            // Any strictly feasible iterate certifies min eig(M(v)) > t.
            if (opts.early_exit_t && t >= *opts.early_exit_t) return finish(SdpStatus::EarlyExit);
            if (t > t_unbounded) return finish(SdpStatus::Unbounded);
        }

        if (centered) {
            // Dual bookkeeping at the stage center: W = S^{-1} / tr(S^{-1})
            // gives upper bound tr(W M0) + sum_i |tr(W M_i)| |v*_i| with the
            // stationarity residuals folded in through the current iterate.
            Matrix S = map.value(v);
            S.diagonal().array() -= t;
            if (cholesky(S, llt)) {
                const Matrix Sinv = llt.solve(Matrix::Identity(s, s));
                const double trace_inv = Sinv.trace();
                double ub = Sinv.cwiseProduct(map.constant()).sum() / trace_inv;
                double residual_term = 0.0;
                for (Index i = 0; i < q; ++i) {
                    const double ri =
                        Sinv.cwiseProduct(map.terms()[static_cast<size_t>(i)]).sum() / trace_inv;
                    residual_term += std::abs(ri) * std::max(1.0, std::abs(v[i]));
                }
                ub += residual_term;
                result.upper_bound = std::min(result.upper_bound, ub);
                result.residual = static_cast<double>(s) / tau + residual_term;
                if (opts.stop_if_ub_below && result.upper_bound < *opts.stop_if_ub_below)
                    return finish(SdpStatus::UpperBounded);
            }
            if (static_cast<double>(s) / tau <= gap_tol) return finish(SdpStatus::Converged);
        }
        if (stalled) {
            // No movement possible at this barrier weight; report best iterate.
            if (std::abs(t - prev_stage_t) <= 1e-14 * std::max(1.0, std::abs(t)))
                return finish(SdpStatus::Stalled);
        }
        stalled = false;
        prev_stage_t = t;
        tau *= opts.tau_growth;
    }
    return finish(SdpStatus::IterationLimit);
}

Feasibility is_feasible(const AffineMatrixMap& map, double margin, const SdpOptions& opts) {
    require(margin >= 0.0, "is_feasible: margin must be nonnegative");
    SdpOptions probe = opts;
    probe.early_exit_t = -margin;
    probe.stop_if_ub_below = -margin;
    Feasibility fb;
    fb.detail = max_min_eig(map, probe);
    fb.feasible = fb.detail.t_star >= -margin;
    if (fb.feasible) fb.witness = fb.detail.v_star;
    return fb;
}

}  // namespace rds
