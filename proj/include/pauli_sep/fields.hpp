#pragma once

#include <array>
#include <functional>
#include <optional>

#include "pauli_sep/frame.hpp"
#include "pauli_sep/grid.hpp"
#include "pauli_sep/scalar_function.hpp"
#include "pauli_sep/types.hpp"

namespace pauli_sep::fields {

/// Arbitrary functions of the scalar potential: F00(t) and F_a0(omega_a), a = 1..3.
struct FCoefficients {
    TimeFunction F00 = TimeFunction::constant(0.0);
    std::array<ScalarFunction, 3> Fa0{ScalarFunction::constant(0.0), ScalarFunction::constant(0.0),
                                      ScalarFunction::constant(0.0)};
};

/// Potentials with the charge premultiplied: eH(t), eA(t, x), eA0(t, x).
struct ElectromagneticPotential {
    std::function<Vec3(double)> eH;
    std::function<Vec3(double, const Vec3&)> eA;
    std::function<double(double, const Vec3&)> eA0;
};

/// Magnetic field generated by the frame rotation; equals -angular_velocity.
Vec3 magnetic_field(const frame::EulerFrame& f, double t);

/// eA = eH x x / 2.
Vec3 vector_potential(const Vec3& eH, const Vec3& x);

/// |eA|^2 as the sum of three squares.
double A_squared(const Vec3& eH, const Vec3& x);

/// P = sum_a (l''/l x'^2 + 2 (l v'' + 2 l' v') x' + l^2 v'^2), with x' = O^T x.
double P_function(const frame::EulerFrame& f, double t, const Vec3& xp);

/// S = 1/4 sum_a (l'/l x'^2 + 2 l v' x').
double S_phase(const frame::EulerFrame& f, double t, const Vec3& xp);

/// Gradient of S with respect to x (not x').
Vec3 S_gradient(const frame::EulerFrame& f, double t, const Vec3& x);

/// eA0 at the point with curvilinear coordinates omega.
double scalar_potential_at(const frame::EulerFrame& f, const FCoefficients& F, double t,
                           const coords::OmegaPoint& omega);

/// eA0 at the space point x; omega is found by Newton inversion (from `hint` when given).
double scalar_potential(const frame::EulerFrame& f, const FCoefficients& F, double t, const Vec3& x,
                        const std::optional<coords::OmegaPoint>& hint = std::nullopt);

/// Potential generated by a frame and F coefficients.
ElectromagneticPotential frame_potential(const frame::EulerFrame& f, const FCoefficients& F);

/// Closed-form gauge function f(t, x) with its gradient and time derivative.
struct GaugeFunction {
    std::function<double(double, const Vec3&)> value;
    std::function<Vec3(double, const Vec3&)> grad;
    std::function<double(double, const Vec3&)> dt;
};

/// eA' = eA + grad f, eA0' = eA0 - df/dt (charge absorbed in f).
ElectromagneticPotential gauge_transform(const ElectromagneticPotential& pot, const GaugeFunction& g);

enum class FdScheme {
    Central2,     ///< second-order central differences at step h
    Richardson4,  ///< central differences at h and h/2 combined to fourth order
};

struct MaxwellOptions {
    double h = 1e-2;
    FdScheme scheme = FdScheme::Richardson4;
};

struct MaxwellReport {
    double r_A0 = 0.0;             ///< max |Box A0 - d/dt (dA0/dt + div A)|
    double r_A = 0.0;              ///< max_i |Box A_i + d_i (dA0/dt + div A)|
    double r_gauge_coupling = 0.0; ///< max |dA0/dt + div A|
    double laplacian_A0 = 0.0;     ///< max |Laplacian A0|
    std::size_t points = 0;
    Vec3 worst_point = Vec3::Zero();
    double worst_time = 0.0;
};

/// Finite-difference residuals of the source-free Maxwell equations over the
/// admissible nodes of a Cartesian grid at each grid time.
///
/// Throws DomainError when the grid has no admissible node or a stencil point
/// falls inside an exclusion.
MaxwellReport maxwell_residual(const ElectromagneticPotential& pot, const GridSpec& grid,
                               const MaxwellOptions& options = {});

/// Single-threaded reference implementation of maxwell_residual.
MaxwellReport maxwell_residual_serial(const ElectromagneticPotential& pot, const GridSpec& grid,
                                      const MaxwellOptions& options = {});

}  // namespace pauli_sep::fields
