#pragma once

// The bundled networked benchmark scenario: a ring of three two-state
// subsystems (see make_networked_plant) modeled with a 6-state affine system
// whose three uncertain entries form the parameter vector xi. Reference
// moments, gains, and the standard experiment parameters live here so the
// CLI, tests, and the acceptance suite share one definition.

#include "rds/enkf.hpp"
#include "rds/identify.hpp"
#include "rds/simulate.hpp"
#include "rds/system.hpp"

namespace rds::benchmark {

// 6-state, 1-input, 3-output model with affine dependence on xi in R^3.
RandomLinearSystem system_model();

// Reference moments of xi recovered by the identification experiment.
Vector reported_mean();
Matrix reported_covariance();
DistributionModel reported_model();

// Expected value of the true fluctuating parameters behind the plant.
Vector true_parameter_mean();

// Reference state-feedback gain designed from the reported moments, and the
// pole-placement comparison gain for poles (0.9, 0.8, ..., 0.4).
Matrix reported_gain();
Matrix reported_pole_gain();
std::vector<double> comparison_poles();

// Standard filter parameters: M = 300, Q = 0.01 diag(1,...,1,2,2,2), R = 0.01 I.
EnkfConfig enkf_config(std::uint64_t seed);
Matrix process_noise();
Matrix measurement_noise();

// Identification experiment: MLS input, window k = 20..100.
IdentificationConfig identification_config(std::uint64_t seed);

// Closed-loop experiment: horizon 101, d_k = 10 for k < 50 then 0.
std::vector<Vector> external_input(long horizon = 101);
ControllerConfig controller_config(const Matrix& F, std::uint64_t seed);
SimulationConfig simulation_config(long horizon = 101);

}  // namespace rds::benchmark
