#pragma once

// Dense LMI feasibility engine for small problems: maximize the minimum
// eigenvalue of an affine symmetric-matrix map M(v) = M0 + sum_i v_i M_i.
// The max-t reformulation (maximize t subject to M(v) - t I >= 0) is solved
// by a log-det barrier Newton method with a path-following schedule; at every
// centered stage the scaled inverse slack gives a dual upper bound, so the
// result carries a certified gap.

#include <optional>
#include <vector>

#include "rds/linalg.hpp"
#include "rds/types.hpp"

namespace rds {

class AffineMatrixMap {
  public:
    // Inputs are symmetrized; asymmetry beyond 1e-9 relative is an error.
    AffineMatrixMap(Matrix M0, std::vector<Matrix> terms);

    Index size() const { return M0_.rows(); }
    Index vars() const { return static_cast<Index>(terms_.size()); }
    const Matrix& constant() const { return M0_; }
    const std::vector<Matrix>& terms() const { return terms_; }

    Matrix value(const Vector& v) const;

  private:
    Matrix M0_;
    std::vector<Matrix> terms_;
};

enum class SdpStatus {
    Converged,       // duality gap below tolerance
    EarlyExit,       // stopped as soon as early_exit_t was certified
    Stalled,         // no further progress; best iterate returned
    IterationLimit,  // stage/newton budget exhausted
    Unbounded,       // objective detected as unbounded above
    UpperBounded,    // certified upper bound fell below stop_if_ub_below
};

struct SdpOptions {
    double grad_tol = 1e-9;       // Newton decrement stop per stage
    int max_newton = 200;         // Newton steps per barrier stage
    int max_stages = 30;          // barrier stages
    double tau0 = 1.0;            // initial barrier weight
    double tau_growth = 10.0;     // stage multiplier
    double gap_tol_rel = 1e-7;    // target duality gap relative to max(1, |M0|)
    double unbounded_t = 1e8;     // t above unbounded_t * max(1, |M0|) => Unbounded
    // Stop as soon as an iterate certifies t >= early_exit_t (feasibility probes).
    std::optional<double> early_exit_t;
    // Stop once the certified upper bound falls below this value.
    std::optional<double> stop_if_ub_below;
};

struct SdpResult {
    Vector v_star;
    double t_star = 0.0;      // min eigenvalue of M(v_star), recomputed
    int iterations = 0;       // total Newton steps
    bool converged = false;
    double residual = 0.0;    // certified duality gap bound (inf when not certified)
    double upper_bound = 0.0; // certified upper bound on max-min-eig (inf when not certified)
    SdpStatus status = SdpStatus::Stalled;
};

SdpResult max_min_eig(const AffineMatrixMap& map, const SdpOptions& opts = {});

struct Feasibility {
    bool feasible = false;
    std::optional<Vector> witness;
    SdpResult detail;
};

// True iff max_min_eig certifies t* >= -margin; exits early on success.
Feasibility is_feasible(const AffineMatrixMap& map, double margin, const SdpOptions& opts = {});

}  // namespace rds
