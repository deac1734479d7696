#pragma once

// Plants to be identified and controlled. A Plant advances one sample per
// step(u) call and emits the measurement for that sample; true_state() is a
// logging-only channel that never feeds back into control code.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rds/system.hpp"
#include "rds/types.hpp"

namespace rds {

class Plant {
  public:
    virtual ~Plant() = default;
    virtual void reset(std::uint64_t seed) = 0;
    // Emits y_k for the applied input and advances the internal state by one sample.
    virtual Vector step(const Vector& u) = 0;
    // For logging and evaluation only.
    virtual Vector true_state() const = 0;
    virtual Index input_dim() const = 0;
    virtual Index output_dim() const = 0;
};

// Maximal length sequence from a Fibonacci LFSR with the given feedback taps
// (1-based bit positions), mapped to {-amplitude, +amplitude}; period 2^order - 1.
std::vector<double> mls(int order, const std::vector<int>& taps, long length, double amplitude);
std::vector<double> mls(int order, long length, double amplitude);

// Primitive feedback taps for orders 3..16.
std::vector<int> default_mls_taps(int order);

// Three cascaded two-state subsystems in a ring, one scalar input on the
// first, measurements [q_2, q_4, q_6]; two of the couplings fluctuate as
// N(0.8, s1_std^2) and N(0.2, s2_std^2) drawn fresh each step. Resets to
// q = [1,...,1].
std::unique_ptr<Plant> make_networked_plant(std::uint64_t seed, double s1_std = 0.2,
                                            double s2_std = 0.3);

// Plant that draws xi_k i.i.d. from the model each step and applies the
// system's state and output maps exactly.
std::unique_ptr<Plant> make_model_plant(RandomLinearSystem sys, DistributionModel model, Vector x0,
                                        std::uint64_t seed);

}  // namespace rds
