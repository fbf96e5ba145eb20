#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace thzsm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

/// Thrown on invalid arguments or malformed inputs (CLI exit code 2).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine fails to converge (CLI exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double db_from_power_ratio(double ratio) { return 10.0 * std::log10(ratio); }
inline double power_ratio_from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace thzsm
