#pragma once

// Open-loop identification of the parameter distribution: drive the plant
// with an excitation input, run the EnKF over the augmented model, and take
// the windowed per-step parameter estimates xi_{k|k} as an empirical
// distribution of xi.

#include <optional>
#include <vector>

#include "rds/enkf.hpp"
#include "rds/plant.hpp"
#include "rds/system.hpp"

namespace rds {

struct IdentificationConfig {
    long k0 = 20;  // burn-in steps discarded from the window
    long k1 = 80;  // window covers k in [k0, k0 + k1]
    double input_amplitude = 1.0;
    int mls_order = 10;
    std::optional<std::vector<int>> mls_taps;
    // Overrides the MLS excitation when present (one vector per step).
    std::optional<std::vector<Vector>> input_sequence;
    EnkfConfig enkf;
    Matrix Q, R;
    double divergence_threshold = 1e6;
};

struct IdentificationTraceRow {
    long k = 0;
    Vector u, y, x_pred, xi_filt;
};

struct IdentificationResult {
    Vector mean;             // window sample mean of xi_{k|k}
    Matrix covariance;       // unbiased (divides by k1)
    GramMatrix empirical_gram;  // mean of r^T r over the window (divides by k1+1)
    std::vector<IdentificationTraceRow> trace;
    bool degenerate_window = false;  // k1 == 0, covariance reported as zero

    DistributionModel to_model() const;
};

IdentificationResult identify(Plant& plant, const RandomLinearSystem& sys,
                              const IdentificationConfig& cfg);

}  // namespace rds
