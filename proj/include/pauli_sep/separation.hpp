#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pauli_sep/coords.hpp"
#include "pauli_sep/fields.hpp"
#include "pauli_sep/frame.hpp"
#include "pauli_sep/grid.hpp"
#include "pauli_sep/spinor.hpp"
#include "pauli_sep/types.hpp"

namespace pauli_sep::separation {

/// Deliberate breakage of a scenario, used as negative controls.
struct Corruption {
    struct StackelEntry {
        int row = 0;  ///< 0-based
        int col = 0;  ///< 0-based
        double delta = 0.5;
    };
    struct StackelColumnCopy {
        int from = 0;  ///< 0-based
        int to = 1;
    };
    /// Offset added to one Staeckel entry in the spatial equations.
    std::optional<StackelEntry> stackel_entry;
    /// Overwrites one column of the coupling matrix [T; S] with another (rank deficient by construction).
    std::optional<StackelColumnCopy> stackel_column_copy;
    /// Added to lambda in the time factor only.
    Vec3 lambda_shift = Vec3::Zero();
    /// Extra phase q_phase * |x|^2 in Q.
    double q_phase = 0.0;

    bool any() const;
};

/// Initial data (phi, phi') of a spatial factor; `at` defaults to the middle of the solved range.
struct SpatialIC {
    Complex value{1.0, 0.0};
    Complex slope{0.0, 0.0};
    std::optional<double> at;
};

/// A complete separable configuration.
struct Scenario {
    explicit Scenario(frame::EulerFrame f) : frame(std::move(f)) {}

    std::string name;
    frame::EulerFrame frame;
    fields::FCoefficients F;
    Vec3 lambda = Vec3::Zero();
    Spinor2 chi = Spinor2(1.0, 0.0);
    GridSpec grid;
    double ode_step = 1e-3;
    std::array<SpatialIC, 3> ic{};
    /// Closed-form eA0 used by the residual operator instead of the value rebuilt from F.
    std::function<double(double, const Vec3&)> eA0_override;
    Corruption corruption;

    const coords::CoordSystem& system() const { return frame.system(); }
};

/// Staeckel row `a` (0-based) of the scenario, including any corruption.
Vec3 effective_stackel_row(const Scenario& s, int a, double omega_a);

/// T_b(l(t)) row of the scenario, including a column-copy corruption.
Vec3 effective_T_row(const Scenario& s, double t);

/// Potential coefficient F_a0(w) + sum_b S_ab(w) lambda_b of the spatial equation for axis a (0-based).
double spatial_coefficient(const Scenario& s, int a, double omega_a);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Tabulated solution of phi'' = V(w) phi with cubic Hermite interpolation.
class SpatialFactor {
public:
    SpatialFactor() = default;
    SpatialFactor(std::function<double(double)> coefficient, Interval range, const SpatialIC& ic,
                  int steps_per_unit = 2000);

    Complex operator()(double w) const;
    Complex derivative(double w) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return values_.size(); }

    /// max |phi''_fd - V phi| over interior nodes relative to max(|phi| + |V phi|),
    /// with phi'' from a fourth-order difference of the tabulated phi'.
    double resubstitution_residual() const;

private:
    std::size_t locate(double w, double& s) const;

    std::function<double(double)> coefficient_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double step_ = 0.0;
    std::vector<Complex> values_;
    std::vector<Complex> slopes_;
};

/// phi0(t) = exp(i int_{t0}^{t} (F00 + T_b lambda_b)), adaptive Simpson to 1e-12.
Complex solve_time_factor(const Scenario& s, double t);

/// axis is 1, 2 or 3.
SpatialFactor solve_spatial_factor(const Scenario& s, int axis, Interval range, const SpatialIC& ic);

struct SolveOptions {
    /// Largest finite-difference offset the solution must support around grid nodes.
    double stencil_reach = 4e-3;
    int steps_per_unit = 2000;
    double resubstitution_tolerance = 1e-8;
};

/// One residual sample: time, curvilinear point, space point.
struct GridPoint {
    double t = 0.0;
    coords::OmegaPoint omega;
    Vec3 x = Vec3::Zero();
};

/// Grid points of the scenario; omega grids map through the frame, x grids
/// drop excluded nodes and invert the frame.
std::vector<GridPoint> scenario_points(const Scenario& s);

/// Tabulated factors of the separated solution psi = Q phi0 phi1 phi2 phi3 chi.
class SeparatedSolution {
public:
    SeparatedSolution(const Scenario& s, spinor::PropagatorTable U, std::array<SpatialFactor, 3> phi);

    const Scenario& scenario() const { return scenario_; }
    const spinor::PropagatorTable& propagator() const { return U_; }
    const SpatialFactor& factor(int a) const { return phi_[static_cast<std::size_t>(a)]; }

    Complex phi0(double t) const { return solve_time_factor(scenario_, t); }
    Mat2C Q(double t, const Vec3& x) const;

    /// psi at the space point x, Newton-started from `hint`.
    Spinor2 psi(double t, const Vec3& x, const coords::OmegaPoint& hint) const;
    /// psi at the point with curvilinear coordinates omega.
    Spinor2 psi_at(double t, const coords::OmegaPoint& omega) const;

private:
    Spinor2 assemble(double t, const Vec3& x, const coords::OmegaPoint& omega) const;

    Scenario scenario_;
    spinor::PropagatorTable U_;
    std::array<SpatialFactor, 3> phi_;
};

/// Builds the propagator table and spatial factors covering the scenario grid.
/// Throws IntegrationError when a factor fails re-substitution.
SeparatedSolution solve(const Scenario& s, const SolveOptions& options = {});

/// psi = Q phi0 phi1 phi2 phi3 chi at the space point x.
Spinor2 assemble_solution(const SeparatedSolution& sol, double t, const Vec3& x);

/// Potentials seen by the Pauli operator; eA0 receives a nearby omega as Newton hint.
struct PauliFields {
    std::function<Vec3(double)> eH;
    std::function<Vec3(double, const Vec3&)> eA;
    std::function<double(double, const Vec3&, const coords::OmegaPoint&)> eA0;
};

/// A wave function together with the potentials it is tested against.
struct PauliProblem {
    std::function<Spinor2(double, const Vec3&, const coords::OmegaPoint&)> psi;
    PauliFields fields;
};

PauliFields scenario_fields(const Scenario& s);
PauliProblem scenario_problem(const SeparatedSolution& sol);

/// Potentials gauge-transformed by f and psi multiplied by exp(i f).
PauliProblem gauge_transform(const PauliProblem& p, const fields::GaugeFunction& g);

struct ResidualOptions {
    double h_x = 1e-3;
    double h_t = 1e-3;
    /// Points with |psi| below this fraction of the grid maximum are skipped.
    double psi_floor = 1e-10;
};

struct ResidualReport {
    double max_rel = 0.0;         ///< max over points of |R| / max(|p0 psi|, |eA0 psi|, |(p-eA)^2 psi|, |sigma.eH psi|) at the point
    double mean_rel = 0.0;        ///< mean of the same ratio
    double max_rel_global = 0.0;  ///< max |R| over the grid maximum of the four operator terms
    std::size_t points = 0;
    std::size_t skipped = 0;
    double h_x = 0.0;
    double h_t = 0.0;
    GridPoint worst;
};

/// Second-order central-difference residual of
///   i d/dt psi - eA0 psi - (p - eA)^2 psi + sigma.eH psi
/// at the given points.
ResidualReport pauli_residual(const PauliProblem& p, const std::vector<GridPoint>& points,
                              const ResidualOptions& options = {});
/// Single-threaded reference implementation of pauli_residual.
ResidualReport pauli_residual_serial(const PauliProblem& p, const std::vector<GridPoint>& points,
                                     const ResidualOptions& options = {});

/// Residual of the scenario's separated solution over its grid.
ResidualReport pauli_residual(const Scenario& s, const SeparatedSolution& sol, const ResidualOptions& options = {});

// ----------------------------------------------------------------------------
// Structural conditions

/// A 2x2 complex matrix function of one variable (t for mu = 0, omega_mu otherwise).
using MatrixFunction = std::function<Mat2C(double)>;

/// Matrix coefficients P_{mu alpha} of the reduced equations, mu, alpha = 0..3:
/// i phi0' = -(P00 + P0b lambda_b) phi0, phi_a'' = (Pa0 + Pab lambda_b) phi_a.
struct ReducedODECoefficients {
    std::array<std::array<MatrixFunction, 4>, 4> P;
    std::string form;

    /// P_mu0 + sum_b P_mub lambda_b at argument u.
    Mat2C combined(int mu, double u, const Vec3& lambda) const;
};

/// Argument tuple (t, omega1, omega2, omega3) for structural checks.
using ArgumentSample = std::array<double, 4>;

struct CommutativityReport {
    bool ok = true;
    double worst = 0.0;  ///< largest commutator norm found
    int mu = 0;
    int nu = 0;
    std::size_t sample = 0;
    Vec3 lambda = Vec3::Zero();
};

/// Pairwise commutators of P_mu0 + P_mub lambda_b vanish (to 1e-12, scaled by
/// the operand norms) at every argument sample and lambda.
CommutativityReport commutativity_check(const ReducedODECoefficients& c, const std::vector<ArgumentSample>& samples,
                                        const std::vector<Vec3>& lambdas);

/// Scalar functions F_{mu alpha}, G_{mu alpha} indexed [mu][alpha].
using ScalarTable = std::array<std::array<ScalarFunction, 4>, 4>;

/// Single shared direction: P_{mu alpha} = F I + G_{mu alpha} (s . sigma).
struct SharedDirectionForm {
    ScalarTable F;
    ScalarTable G;
    Vec3 s = Vec3::UnitZ();
};

/// Shared profile per equation: P_{mu alpha} = F I + G_mu (s_alpha . sigma).
struct SharedProfileForm {
    ScalarTable F;
    std::array<ScalarFunction, 4> G;
    std::array<Vec3, 4> s{Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
};

/// General Hermitian form P_{mu alpha} = F I + G_{mu alpha} (s_alpha . sigma); no commutativity implied.
struct GeneralForm {
    ScalarTable F;
    ScalarTable G;
    std::array<Vec3, 4> s;
};

/// Builds the coefficients and validates, at the samples, the lambda-split condition
///   [P_{mu alpha}, P_{nu beta}] + [P_{mu beta}, P_{nu alpha}] = 0.
/// Throws ConstructionError on violation.
ReducedODECoefficients matrix_coefficient_forms(const SharedDirectionForm& spec,
                                                const std::vector<ArgumentSample>& samples);
ReducedODECoefficients matrix_coefficient_forms(const SharedProfileForm& spec,
                                                const std::vector<ArgumentSample>& samples);
/// Unvalidated builder for arbitrary (possibly non-commuting) coefficient sets.
ReducedODECoefficients general_coefficient_form(const GeneralForm& spec);
/// general_coefficient_form followed by the lambda-split validation.
ReducedODECoefficients matrix_coefficient_forms(const GeneralForm& spec, const std::vector<ArgumentSample>& samples);

/// Scalar coefficients of a scenario: P_0b = T_b I, P_ab = S_ab I, P_a0 = F_a0 I, P_00 = F00 I.
ReducedODECoefficients stackel_coefficient_forms(const Scenario& s);

/// Numerical rank by full-pivot elimination after scaling each row to unit max-norm.
int numerical_rank(const Eigen::Matrix<double, 4, 3>& m, double pivot_threshold = 1e-10);

struct RankSample {
    double t = 0.0;
    coords::OmegaPoint omega;
};

struct RankReport {
    bool ok = true;
    int min_rank = 3;
    std::size_t failing_sample = 0;
};

/// rank [T_b(t); S_ab(omega_a)] = 3 at every sample.
RankReport rank_check(const frame::EulerFrame& f, const std::vector<RankSample>& samples);
/// Same with the scenario's effective (possibly corrupted) Staeckel rows.
RankReport rank_check(const Scenario& s, const std::vector<RankSample>& samples);

// ----------------------------------------------------------------------------
// Fixed-potential path

/// Rotation O(t) tabulated on a uniform grid by integrating dO/dt = -hat(eH) O, O(0) = I.
struct RotationTable {
    std::vector<double> times;
    std::vector<Mat3> rotations;
    double max_orthogonality_defect = 0.0;

    /// Cubic Hermite interpolation with slopes -hat(eH) O.
    Mat3 at(double t, const spinor::FieldFunction& eH) const;
};

/// RK4 with polar re-projection each step; IntegrationError if ||O^T O - I|| exceeds 1e-9.
RotationTable fixed_potential_frame(const spinor::FieldFunction& eH, double t1, double step = 1e-3);

/// Euler angles along a rotation table with alpha and beta unwrapped in time.
std::vector<frame::EulerAngles> unwrapped_euler_angles(const RotationTable& table);

struct GaugeReduction {
    Vec3 eH = Vec3::Zero();
    Mat3 M = Mat3::Zero();   ///< fitted linear part
    Vec3 b = Vec3::Zero();   ///< fitted offset
    double defect = 0.0;     ///< max over samples of |sym(M) x + b|_inf (gauge-removable part)
    double nonlinearity = 0.0;
};

/// Least-squares fit eA(t, x) = M x + b over the samples; eH from the antisymmetric part of M.
/// Throws NotSeparableError when the fit residual exceeds `nonlinearity_tolerance`.
GaugeReduction gauge_reduce(const std::function<Vec3(double, const Vec3&)>& eA, double t,
                            const std::vector<Vec3>& x_samples, double nonlinearity_tolerance = 1e-6);

}  // namespace pauli_sep::separation
