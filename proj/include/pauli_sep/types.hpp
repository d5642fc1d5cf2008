#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pauli_sep {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2C = Eigen::Matrix2cd;
using Spinor2 = Eigen::Vector2cd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the admissible domain (coordinate bounds, zero scales, singular loci).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Jacobian or system matrix numerically singular.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// ODE integration drifted outside its tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Inconsistent object construction (split-class violation, non-commuting coefficient structure).
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Vector potential cannot be gauge-reduced to the antisymmetric linear form.
class NotSeparableError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario document.
class SchemaError : public Error {
public:
    using Error::Error;
};

inline Mat3 hat(const Vec3& w) {
    Mat3 m;
    m << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
        -w.y(), w.x(), 0.0;
    return m;
}

/// Axial vector of the antisymmetric part of m.
inline Vec3 vee(const Mat3& m) {
    return Vec3(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1)));
}

}  // namespace pauli_sep
