#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace opcalc {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition: bad sizes, out-of-range parameters, wrong domain tag.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Spectral parameter too close to the spectrum or to a branch cut.
class NearSpectrumError : public Error {
public:
    using Error::Error;
};

/// Iterative process that failed to converge or diverged.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace opcalc
