#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gal {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Malformed input files or inconsistent corpus contents.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration: unknown strategy, bad schedule, mismatched options.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: singular kernel, diverging optimizer, zero-norm vector.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gal
