#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tdhinf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix shapes of a system description do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NegativeDelay : public Error {
public:
    using Error::Error;
};

/// The resolvent (jw I - A0 - sum A_i e^{-jw tau_i}) is numerically singular,
/// i.e. jw sits on or next to a characteristic root of the delay system.
class SingularResolvent : public Error {
public:
    using Error::Error;
};

/// D^T D - xi^2 I is singular (xi coincides with a singular value of D).
class SingularDxi : public Error {
public:
    SingularDxi(const std::string& what, double sigma_max_d)
        : Error(what), sigma_max_d_(sigma_max_d) {}
    double sigma_max_d() const noexcept { return sigma_max_d_; }

private:
    double sigma_max_d_;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

/// The mesh does not cover the largest delay of the system.
class MeshTooSmall : public Error {
public:
    using Error::Error;
};

class EigenFailure : public Error {
public:
    using Error::Error;
};

/// The bordered collocation system is singular for the requested lambda.
class CollocationSingular : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

}  // namespace tdhinf
