#pragma once

#include <array>

#include "pauli_sep/coords.hpp"
#include "pauli_sep/scalar_function.hpp"
#include "pauli_sep/types.hpp"

namespace pauli_sep::frame {

/// Time window on which a frame is validated and used.
struct TimeWindow {
    double t0 = 0.0;
    double t1 = 1.0;
};

/// Moving frame x = O(t) L(t) (z(omega) + v(t)) bound to a coordinate family.
///
/// Construction checks that no scale crosses zero on the window and that the
/// scales obey the family's split class (l1 = l2 for families 2-4, all equal
/// for 5-11); violations raise ConstructionError.
class EulerFrame {
public:
    EulerFrame(coords::CoordSystem sys, TimeFunction alpha, TimeFunction beta, TimeFunction gamma,
               std::array<TimeFunction, 3> scales, std::array<TimeFunction, 3> shifts, TimeWindow window = {});

    /// O = I, L = I, v = 0.
    static EulerFrame identity(coords::CoordSystem sys, TimeWindow window = {});

    const coords::CoordSystem& system() const { return sys_; }
    const TimeFunction& alpha() const { return alpha_; }
    const TimeFunction& beta() const { return beta_; }
    const TimeFunction& gamma() const { return gamma_; }
    const std::array<TimeFunction, 3>& scales() const { return scales_; }
    const std::array<TimeFunction, 3>& shifts() const { return shifts_; }
    TimeWindow window() const { return window_; }

    /// Values and derivatives of l_a(t) and v_a(t).
    std::array<Jet, 3> scale_jets(double t) const;
    std::array<Jet, 3> shift_jets(double t) const;

private:
    coords::CoordSystem sys_;
    TimeFunction alpha_, beta_, gamma_;
    std::array<TimeFunction, 3> scales_;
    std::array<TimeFunction, 3> shifts_;
    TimeWindow window_;
};

/// Rotation matrix with Euler angles (alpha, beta, gamma).
Mat3 rotation_matrix(double alpha, double beta, double gamma);
Mat3 rotation_matrix(const EulerFrame& f, double t);

/// Angular velocity Omega(t), the axial vector of dO/dt O^-1.
Vec3 angular_velocity(const EulerFrame& f, double t);

/// dO/dt O^-1 in closed form.
Mat3 rotation_rate_matrix(const EulerFrame& f, double t);

struct MDecomposition {
    Mat3 antisym;  ///< dO/dt O^-1
    Mat3 sym;      ///< O dL/dt L^-1 O^-1
};
MDecomposition M_matrix(const EulerFrame& f, double t);

Vec3 x_of_omega(const EulerFrame& f, double t, const coords::OmegaPoint& omega);

/// x' = O^T x.
Vec3 x_prime(const EulerFrame& f, double t, const Vec3& x);

/// Frame-local coordinates z = L^-1 O^T x - v.
Vec3 z_of_x(const EulerFrame& f, double t, const Vec3& x);

/// Curvilinear coordinates of the space point x at time t, Newton-started from `hint`.
coords::OmegaPoint omega_of_x(const EulerFrame& f, double t, const Vec3& x, const coords::OmegaPoint& hint);
coords::OmegaPoint omega_of_x(const EulerFrame& f, double t, const Vec3& x);

struct EulerAngles {
    double alpha;
    double beta;
    double gamma;
};

/// Inverse of rotation_matrix. When sin(gamma) vanishes only alpha + beta (or
/// alpha - beta) is determined; beta is then reported as 0.
EulerAngles euler_angles(const Mat3& rotation);

}  // namespace pauli_sep::frame
