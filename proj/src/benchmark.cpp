#include "rds/benchmark.hpp"

namespace rds::benchmark {

RandomLinearSystem system_model() {
    AffineCoefficients c = AffineCoefficients::zero(6, 1, 3, 3);
    c.A0 << 0, -0.4, 0, 0, 0, 0,
            1,  1.3, 0, 0, 0, 0.4,
            0,  0,   0, 0, 0, 0,
            0,  0.4, 1, 0, 0, 0,
            0,  0,   0, 0, 0, -0.8,
            0,  0,   0, 0, 1, 0;
    c.A[0](3, 3) = 1.0;                      // xi_1: coupling inside the middle subsystem
    c.A[1](5, 3) = 1.0; c.A[1](5, 5) = 1.0;  // xi_2: gain and coupling of the third subsystem
    c.A[2](2, 3) = -1.0;                     // xi_3: upper companion entry of the middle subsystem
    c.B0(1, 0) = 0.4;
    c.C0(0, 1) = 1.0;
    c.C0(1, 3) = 1.0;
    c.C0(2, 5) = 1.0;
    RandomLinearSystem sys;
    sys.coeffs = std::move(c);
    sys.label = "networked-benchmark";
    return sys;
}

Vector reported_mean() { return (Vector(3) << 0.4403, 0.1739, 0.5003).finished(); }

Matrix reported_covariance() {
    Matrix cov(3, 3);
    cov <<  0.0192, -0.0039,  0.0081,
           -0.0039,  0.0750, -0.0006,
            0.0081, -0.0006,  0.0205;
    return cov;
}

DistributionModel reported_model() {
    return DistributionModel::from_moments(reported_mean(), reported_covariance());
}

Vector true_parameter_mean() { return (Vector(3) << 0.56, 0.2, 0.6).finished(); }

Matrix reported_gain() {
    Matrix F(1, 6);
    F << -2.4986, -4.8035, -3.8835, 2.2159, 5.2592, 4.6178;
    return F;
}

Matrix reported_pole_gain() {
    Matrix F(1, 6);
    F << -1.5556, 4.9645, 12.1698, -16.8991, -71.3356, 24.6177;
    return F;
}

std::vector<double> comparison_poles() { return {0.9, 0.8, 0.7, 0.6, 0.5, 0.4}; }

EnkfConfig enkf_config(std::uint64_t seed) {
    EnkfConfig cfg;
    cfg.members = 300;
    cfg.seed = seed;
    return cfg;
}

Matrix process_noise() {
    Vector diag(9);
    diag << 1, 1, 1, 1, 1, 1, 2, 2, 2;
    return 0.01 * Matrix(diag.asDiagonal());
}

Matrix measurement_noise() { return 0.01 * Matrix::Identity(3, 3); }

IdentificationConfig identification_config(std::uint64_t seed) {
    IdentificationConfig cfg;
    cfg.k0 = 20;
    cfg.k1 = 80;
    cfg.mls_order = 10;
    cfg.input_amplitude = 2.0;
    cfg.enkf = enkf_config(seed);
    cfg.Q = process_noise();
    cfg.R = measurement_noise();
    return cfg;
}

std::vector<Vector> external_input(long horizon) {
    std::vector<Vector> d;
    d.reserve(static_cast<size_t>(horizon));
    for (long k = 0; k < horizon; ++k)
        d.push_back(Vector::Constant(1, k < 50 ? 10.0 : 0.0));
    return d;
}

ControllerConfig controller_config(const Matrix& F, std::uint64_t seed) {
    ControllerConfig cfg;
    cfg.F = F;
    cfg.enkf = enkf_config(seed);
    cfg.Q = process_noise();
    cfg.R = measurement_noise();
    cfg.sys = system_model();
    cfg.psi0 = Vector::Zero(9);
    return cfg;
}

SimulationConfig simulation_config(long horizon) {
    SimulationConfig cfg;
    cfg.horizon = horizon;
    cfg.d = external_input(horizon);
    return cfg;
}

}  // namespace rds::benchmark
