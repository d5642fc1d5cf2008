#pragma once

#include <array>
#include <string>
#include <vector>

#include "pauli_sep/types.hpp"

namespace pauli_sep::coords {

/// The eleven coordinate families; the underlying value is the conventional index 1..11.
enum class Family : int {
    Cartesian = 1,
    Cylindrical,
    ParabolicCylindrical,
    EllipticCylindrical,
    Spherical,
    ProlateSpheroidal,
    OblateSpheroidal,
    Parabolic,
    Paraboloidal,
    Ellipsoidal,
    Conical,
};

inline constexpr int kFamilyCount = 11;

/// How the dilatation scales l1, l2, l3 of a moving frame may differ.
enum class SplitClass { FullySplit, PartiallySplit, NonSplit };

constexpr double kDefaultDomainMargin = 1e-6;

/// A point (omega1, omega2, omega3) in curvilinear coordinates.
struct OmegaPoint {
    std::array<double, 3> w{};

    OmegaPoint() = default;
    OmegaPoint(double w1, double w2, double w3) : w{w1, w2, w3} {}
    explicit OmegaPoint(const Vec3& v) : w{v.x(), v.y(), v.z()} {}

    double operator[](int i) const { return w[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return w[static_cast<std::size_t>(i)]; }
    Vec3 vec() const { return Vec3(w[0], w[1], w[2]); }
};

/// Coordinate family with its geometric parameters.
///
/// `a` is used by families 4, 6, 7, 9, 10 and `k` by families 10, 11. For the
/// prolate spheroidal family, `z3_shift` in {-1, 0, +1} selects the shifted
/// "variant II" map z3 = a (coth w1 tanh w2 + z3_shift).
class CoordSystem {
public:
    explicit CoordSystem(Family family, double a = 1.0, double k = 0.5, int z3_shift = 0);

    static CoordSystem from_name(const std::string& name, double a = 1.0, double k = 0.5, int z3_shift = 0);

    Family family() const { return family_; }
    int index() const { return static_cast<int>(family_); }
    double a() const { return a_; }
    double k() const { return k_; }
    double k_prime() const { return k_prime_; }
    /// Quarter periods K(k) and K(k'); zero for families without a modulus.
    double quarter_period() const { return quarter_k_; }
    double quarter_period_prime() const { return quarter_k_prime_; }
    int z3_shift() const { return z3_shift_; }

    SplitClass split_class() const;
    bool uses_a() const;
    bool uses_k() const;
    std::string name() const;

private:
    Family family_;
    double a_;
    double k_;
    double k_prime_ = 0.0;
    double quarter_k_ = 0.0;
    double quarter_k_prime_ = 0.0;
    int z3_shift_;
};

std::string family_name(Family family);
Family family_from_name(const std::string& name);

/// Human-readable listing entry for a family.
struct FamilyInfo {
    int index;
    std::string name;
    std::string parameters;
    std::string domain;
    std::string split_class;
    std::string note;
};
std::vector<FamilyInfo> family_catalog();

/// Throws DomainError naming the violated bound when omega is not at least
/// `margin` inside the family's domain or lies on a singular locus.
void check_domain(const CoordSystem& sys, const OmegaPoint& omega, double margin = kDefaultDomainMargin);

Vec3 z_of_omega(const CoordSystem& sys, const OmegaPoint& omega);

/// d z_i / d omega_j by analytic differentiation.
Mat3 jacobian(const CoordSystem& sys, const OmegaPoint& omega);

struct NewtonOptions {
    int max_iterations = 50;
    int max_halvings = 20;
    double tolerance = 1e-13;
};

/// Newton inversion of z_of_omega starting from `guess`; stays on the branch around the guess.
OmegaPoint omega_of_z(const CoordSystem& sys, const Vec3& z, const OmegaPoint& guess,
                      const NewtonOptions& options = {});

/// Closed-form preimage for families 1-8, coarse seed search for 9-11.
OmegaPoint initial_guess(const CoordSystem& sys, const Vec3& z);

/// omega_of_z seeded by initial_guess.
OmegaPoint omega_of_z(const CoordSystem& sys, const Vec3& z);

/// Squared gradient magnitudes R_a^{-2} of the coordinates in a frame with dilatation scales l.
Vec3 eikonal(const CoordSystem& sys, const OmegaPoint& omega, const Vec3& scales);

/// Row `row` (0-based) of the Staeckel matrix; depends on omega_row only.
Vec3 stackel_row(const CoordSystem& sys, int row, double omega_row);

Mat3 stackel_matrix(const CoordSystem& sys, const OmegaPoint& omega);

/// (T1, T2, T3) as functions of the dilatation scales.
Vec3 T_functions(const CoordSystem& sys, const Vec3& scales);

}  // namespace pauli_sep::coords
