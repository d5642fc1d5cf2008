#pragma once

#include <functional>
#include <vector>

#include "pauli_sep/frame.hpp"
#include "pauli_sep/types.hpp"

namespace pauli_sep::spinor {

using FieldFunction = std::function<Vec3(double)>;

/// sigma_1, sigma_2, sigma_3 for i = 1, 2, 3; DomainError otherwise.
Mat2C pauli_sigma(int i);

/// sigma . v
Mat2C sigma_dot(const Vec3& v);

/// ||M* M - I||_F
double unitarity_defect(const Mat2C& m);

struct PropagatorOptions {
    double step = 1e-3;
    double drift_tolerance = 1e-6;  ///< IntegrationError above this unitarity defect
};

struct PropagatorResult {
    Mat2C U;
    double max_unitarity_defect = 0.0;  ///< over the whole integration span
    double error_estimate = 0.0;        ///< Richardson estimate from a half-step rerun
};

/// U(t) solving dU/dt = i (sigma . eH(t)) U, U(0) = I, by fixed-step RK4 (t >= 0).
///
/// The last step is shortened to land on t exactly.
Mat2C solve_U(const FieldFunction& eH, double t, double step = 1e-3);

/// solve_U with the drift record and the step-halving error estimate.
PropagatorResult solve_U_report(const FieldFunction& eH, double t, const PropagatorOptions& options = {});

/// RK4 tabulation of U on a uniform grid covering [t_lo, t_hi] (integrating
/// from t = 0 in both directions), evaluated between nodes by cubic Hermite
/// interpolation with the ODE right-hand side as nodal derivative.
class PropagatorTable {
public:
    PropagatorTable(FieldFunction eH, double t_lo, double t_hi, const PropagatorOptions& options = {});

    Mat2C operator()(double t) const;
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    double max_unitarity_defect() const { return max_defect_; }

private:
    Mat2C rhs(double t, const Mat2C& u) const;

    FieldFunction eH_;
    double step_;
    long first_index_;
    double t_lo_;
    double t_hi_;
    std::vector<Mat2C> nodes_;
    std::vector<Mat2C> slopes_;
    double max_defect_ = 0.0;
};

/// Q = U (l1 l2 l3)^(-1/2) exp(i S(t, x)).
Mat2C Q_multiplier(const frame::EulerFrame& f, double t, const Vec3& x, const Mat2C& U);

/// S1 = -1/2 sum_a ln l_a.
double S1_damping(const frame::EulerFrame& f, double t);

}  // namespace pauli_sep::spinor
