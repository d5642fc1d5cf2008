#pragma once

#include <string>
#include <vector>

#include "pauli_sep/coords.hpp"
#include "pauli_sep/fields.hpp"
#include "pauli_sep/grid.hpp"
#include "pauli_sep/scalar_function.hpp"
#include "pauli_sep/separation.hpp"
#include "pauli_sep/types.hpp"

namespace pauli_sep::catalog {

/// Maxwell-compatible separable potentials with non-zero magnetic field.
enum class CatalogCase { NonStationary, S1, S2, S3, S4, S5, S6, S7 };

/// S7 with ln(x1 + x2) (default), or the ln(x1^2 + x2^2) reading (not canonical).
enum class S7Form { Verbatim, Amended };

/// Named constants of a case; each case reads only the ones it prints.
struct CatalogParams {
    double A = 0.5;
    double B = 1.0;
    double k = 1.0;
    double q = 1.0;
    double a = 1.0;
    double a1 = 1.0;
    double a2 = 0.5;
    double a3 = 0.25;
    double c = 0.0;
    double C1 = 2.0;
    double c3 = 0.0;
    double c11 = 0.0;
    double c12 = 0.0;
    double c13 = 0.0;
    S7Form s7 = S7Form::Verbatim;
};

std::string case_name(CatalogCase c);
/// Accepts "nonstationary", "s1".."s7" (case-insensitive); throws DomainError otherwise.
CatalogCase case_from_name(const std::string& name);
std::vector<CatalogCase> all_cases();

/// Parameter names a case depends on, in display order.
std::vector<std::string> case_parameters(CatalogCase c);

/// Validates k != 0 for stationary cases and a > 0 where a is a half-distance.
void check_params(CatalogCase c, const CatalogParams& p);

/// eA0(x). Time-independent for every case. Throws DomainError on the singular loci:
/// the origin (S2, S3, S6), the x3 axis (S3, S4, S5, S6), the focal disk x3 = 0, r <= a (S5),
/// and x1 + x2 <= 0 (S7 verbatim) or x1 = x2 = 0 (S7 amended).
double catalog_A0(CatalogCase c, const CatalogParams& p, const Vec3& x);

/// Case S5 through the complex-centre expression; agrees with catalog_A0 off the singular loci.
double s5_complex_form(const CatalogParams& p, const Vec3& x);

/// Polynomial part -k^2/12 (x1^2 + x2^2 - 2 x3^2) with the case's own prefactor.
double catalog_quadratic_part(CatalogCase c, const CatalogParams& p, const Vec3& x);

/// eH(t): (0, 0, At + B) for the non-stationary case, (0, 0, k) otherwise.
Vec3 catalog_magnetic_field(CatalogCase c, const CatalogParams& p, double t);

/// Singular loci as grid exclusions of the given radius.
std::vector<Exclusion> catalog_exclusions(CatalogCase c, const CatalogParams& p, double radius = 0.5);

/// Default Cartesian verification grid: [-2, 2]^3 with 9 points per axis (S7 verbatim
/// uses x1, x2 in [0.6, 2]), times {0, 0.5}, case exclusions at radius 0.5.
GridSpec catalog_default_grid(CatalogCase c, const CatalogParams& p);

fields::ElectromagneticPotential catalog_potential(CatalogCase c, const CatalogParams& p);

fields::MaxwellReport catalog_maxwell_check(CatalogCase c, const CatalogParams& p, const GridSpec& grid,
                                            const fields::MaxwellOptions& options = {});

/// Tabulated l, l3, v of the non-stationary case.
struct FrameSolution {
    std::vector<double> t;
    std::vector<double> l, dl, l3, dl3;
    std::vector<Vec3> v, dv;

    /// Largest relative defect of the five ODEs, second derivatives from a
    /// fourth-order difference of the tabulated first derivatives.
    double resubstitution_residual(const CatalogParams& p) const;
};

struct FrameInitialState {
    double l = 1.0;
    double dl = 0.0;
    double l3 = 1.0;
    double dl3 = 0.0;
    Vec3 v = Vec3::Zero();
    Vec3 dv = Vec3::Zero();
};

/// Second derivatives (l'', l3'', v'') of the non-stationary frame system at time t.
struct FrameAcceleration {
    double l = 0.0;
    double l3 = 0.0;
    Vec3 v = Vec3::Zero();
};
FrameAcceleration case1_frame_rhs(const CatalogParams& p, double t, double l, double dl, double l3, double dl3,
                                  const Vec3& v, const Vec3& dv);

/// RK4 on [0, t1] with the given step. Throws IntegrationError when a scale reaches zero.
FrameSolution case1_frame_solve(const CatalogParams& p, const FrameInitialState& init, double t1,
                                double step = 1e-3);

/// Scale-function closed forms of the stationary case with a linear potential.
enum class LVariant {
    Plus,   ///< l^2 = sqrt(C1^2 + 1/k^2) sin(2 sqrt(2/3) k t) + C1, c = -1
    Minus,  ///< l^2 = sqrt(C1^2 - 1/k^2) sin(2 sqrt(2/3) k t) + C1, c = +1
    Sine,   ///< l = C1 sin(sqrt(2/3) k t), c = 0
};

/// The constant c in k^2 + (3/2) l''/l = c / l^4 for a variant.
double l_variant_c(LVariant v);

/// l(t) with exact first and second derivatives. Throws DomainError for a negative
/// radicand or l^2 <= 0.
Jet case2_l_closed_form(double C1, double k, LVariant variant, double t);

/// Spherical-coordinate scenario for eA0 = q/|x| - c^2/12 (x1^2 + x2^2 - 2 x3^2):
/// alpha = -c t, constant beta and gamma, unit scales, no shift, and
/// F10 = q w^-3 + c^2/6 w^-6 + k1 w^-4 - k2 w^-2, F20 = k2 sech^2 w - k3, F30 = k3, F00 = k1.
separation::Scenario proposition_example(double q, double c, double k1, double k2, double k3, double beta = 0.0,
                                         double gamma = 0.0);

/// eA0 = q/|x| - c^2/12 (x1^2 + x2^2 - 2 x3^2).
double proposition_A0(double q, double c, const Vec3& x);

/// Coordinate systems admitted by the fixed Coulomb-plus-quadratic potential:
/// spherical, shifted prolate spheroidal (variant II) and conical.
std::vector<coords::CoordSystem> proposition_coordinate_menu(double a = 1.0, int z3_shift = 1, double k = 0.5);

}  // namespace pauli_sep::catalog
