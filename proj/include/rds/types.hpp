#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace rds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Bad configuration or input files (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed beyond recovery (CLI exit code 4).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A simulated experiment left the trusted numeric range (CLI exit code 5).
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& msg, long step_index)
        : std::runtime_error(msg + " at step " + std::to_string(step_index)), step(step_index) {}
    long step;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace rds
