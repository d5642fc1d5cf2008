#include "pauli_sep/coords.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "pauli_sep/specialfn.hpp"

namespace pauli_sep::coords {

namespace {

using std::cos;
using std::cosh;
using std::exp;
using std::sin;
using std::sinh;
using std::tanh;

constexpr double kPi = std::numbers::pi;

struct Elliptic3 {
    specialfn::JacobiTriple e1;  // (omega1, k)
    specialfn::JacobiTriple e2;  // (omega2, k')
    specialfn::JacobiTriple e3;  // (omega3, k)
};

Elliptic3 elliptic_terms(const CoordSystem& sys, const OmegaPoint& w) {
    return {specialfn::jacobi_sn_cn_dn(w[0], sys.k()), specialfn::jacobi_sn_cn_dn(w[1], sys.k_prime()),
            specialfn::jacobi_sn_cn_dn(w[2], sys.k())};
}

std::string describe(const OmegaPoint& w) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << w[0] << ", " << w[1] << ", " << w[2] << ")";
    return os.str();
}

/// Empty string when inside, otherwise the violated bound.
std::string domain_violation(const CoordSystem& sys, const OmegaPoint& w, double margin) {
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(w[i])) return "non-finite omega component";
    }
    const auto lower = [&](int i, double bound, const char* text) -> std::string {
        return w[i] > bound + margin ? "" : std::string(text);
    };
    switch (sys.family()) {
        case Family::Cartesian:
        case Family::Cylindrical:
        case Family::Parabolic:
            return "";
        case Family::ParabolicCylindrical:
        case Family::EllipticCylindrical:
        case Family::Spherical:
        case Family::ProlateSpheroidal:
            return lower(0, 0.0, "omega1 > 0");
        case Family::OblateSpheroidal: {
            if (auto v = lower(0, 0.0, "omega1 > 0"); !v.empty()) return v;
            return w[0] < kPi / 2.0 - margin ? "" : "omega1 < pi/2";
        }
        case Family::Paraboloidal: {
            const double p = cosh(2 * w[0]) - cos(2 * w[1]);
            const double r = cos(2 * w[1]) + cosh(2 * w[2]);
            if (p <= margin) return "cosh(2 omega1) - cos(2 omega2) > 0 (singular focal set)";
            if (r <= margin) return "cos(2 omega2) + cosh(2 omega3) > 0 (singular focal set)";
            return "";
        }
        case Family::Ellipsoidal: {
            if (auto v = lower(0, 0.0, "omega1 > 0"); !v.empty()) return v;
            if (w[0] >= sys.quarter_period() - margin) return "omega1 < K(k)";
            if (std::abs(w[1]) >= sys.quarter_period_prime() - margin) return "|omega2| < K(k')";
            const auto e = elliptic_terms(sys, w);
            const double x = e.e1.dn * e.e1.dn / (e.e1.sn * e.e1.sn);
            const double y = sys.k_prime() * sys.k_prime() * e.e2.cn * e.e2.cn;
            const double z = sys.k() * sys.k() * e.e3.cn * e.e3.cn;
            if (x - y <= margin) return "dn^2/sn^2(omega1) - k'^2 cn^2(omega2) > 0 (focal set)";
            if (y + z <= margin) return "k'^2 cn^2(omega2) + k^2 cn^2(omega3) > 0 (focal set)";
            return "";
        }
        case Family::Conical: {
            if (auto v = lower(0, 0.0, "omega1 > 0"); !v.empty()) return v;
            if (std::abs(w[1]) >= sys.quarter_period_prime() - margin) return "|omega2| < K(k')";
            const auto e2 = specialfn::jacobi_sn_cn_dn(w[1], sys.k_prime());
            const auto e3 = specialfn::jacobi_sn_cn_dn(w[2], sys.k());
            const double y = sys.k_prime() * sys.k_prime() * e2.cn * e2.cn;
            const double z = sys.k() * sys.k() * e3.cn * e3.cn;
            if (y + z <= margin) return "k'^2 cn^2(omega2) + k^2 cn^2(omega3) > 0 (conical vertex lines)";
            return "";
        }
    }
    return "";
}

Vec3 z_raw(const CoordSystem& sys, const OmegaPoint& w) {
    const double a = sys.a();
    switch (sys.family()) {
        case Family::Cartesian:
            return w.vec();
        case Family::Cylindrical: {
            const double rho = exp(w[0]);
            return {rho * cos(w[1]), rho * sin(w[1]), w[2]};
        }
        case Family::ParabolicCylindrical:
            return {0.5 * (w[0] * w[0] - w[1] * w[1]), w[0] * w[1], w[2]};
        case Family::EllipticCylindrical:
            return {a * cosh(w[0]) * cos(w[1]), a * sinh(w[0]) * sin(w[1]), w[2]};
        case Family::Spherical: {
            const double rho = 1.0 / (w[0] * cosh(w[1]));
            return {rho * cos(w[2]), rho * sin(w[2]), tanh(w[1]) / w[0]};
        }
        case Family::ProlateSpheroidal: {
            const double rho = a / (sinh(w[0]) * cosh(w[1]));
            return {rho * cos(w[2]), rho * sin(w[2]), a * (tanh(w[1]) / tanh(w[0]) + sys.z3_shift())};
        }
        case Family::OblateSpheroidal: {
            const double rho = a / (sin(w[0]) * cosh(w[1]));
            return {rho * cos(w[2]), rho * sin(w[2]), a * tanh(w[1]) / std::tan(w[0])};
        }
        case Family::Parabolic: {
            const double rho = exp(w[0] + w[1]);
            return {rho * cos(w[2]), rho * sin(w[2]), 0.5 * (exp(2 * w[0]) - exp(2 * w[1]))};
        }
        case Family::Paraboloidal:
            return {2 * a * cosh(w[0]) * cos(w[1]) * sinh(w[2]), 2 * a * sinh(w[0]) * sin(w[1]) * cosh(w[2]),
                    0.5 * a * (cosh(2 * w[0]) + cos(2 * w[1]) - cosh(2 * w[2]))};
        case Family::Ellipsoidal: {
            const auto e = elliptic_terms(sys, w);
            const double inv = a / e.e1.sn;
            return {inv * e.e2.dn * e.e3.sn, inv * e.e1.dn * e.e2.cn * e.e3.cn, inv * e.e1.cn * e.e2.sn * e.e3.dn};
        }
        case Family::Conical: {
            const auto e2 = specialfn::jacobi_sn_cn_dn(w[1], sys.k_prime());
            const auto e3 = specialfn::jacobi_sn_cn_dn(w[2], sys.k());
            return Vec3(e2.dn * e3.sn, e2.cn * e3.cn, e2.sn * e3.dn) / w[0];
        }
    }
    return Vec3::Zero();
}

Mat3 jacobian_raw(const CoordSystem& sys, const OmegaPoint& w) {
    const double a = sys.a();
    Mat3 j = Mat3::Zero();
    // axially symmetric families: z = (rho cos w3, rho sin w3, z3(w1, w2))
    const auto axial = [&](double rho, double drho1, double drho2, double dz1, double dz2) {
        const double c = cos(w[2]);
        const double s = sin(w[2]);
        j << drho1 * c, drho2 * c, -rho * s,
             drho1 * s, drho2 * s, rho * c,
             dz1, dz2, 0.0;
    };
    switch (sys.family()) {
        case Family::Cartesian:
            return Mat3::Identity();
        case Family::Cylindrical: {
            const double z1 = exp(w[0]) * cos(w[1]);
            const double z2 = exp(w[0]) * sin(w[1]);
            j << z1, -z2, 0, z2, z1, 0, 0, 0, 1;
            return j;
        }
        case Family::ParabolicCylindrical:
            j << w[0], -w[1], 0, w[1], w[0], 0, 0, 0, 1;
            return j;
        case Family::EllipticCylindrical: {
            const double p = a * sinh(w[0]) * cos(w[1]);
            const double q = a * cosh(w[0]) * sin(w[1]);
            j << p, -q, 0, q, p, 0, 0, 0, 1;
            return j;
        }
        case Family::Spherical: {
            const double rho = 1.0 / (w[0] * cosh(w[1]));
            const double z3 = tanh(w[1]) / w[0];
            const double sech = 1.0 / cosh(w[1]);
            axial(rho, -rho / w[0], -rho * tanh(w[1]), -z3 / w[0], sech * sech / w[0]);
            return j;
        }
        case Family::ProlateSpheroidal: {
            const double rho = a / (sinh(w[0]) * cosh(w[1]));
            const double csch = 1.0 / sinh(w[0]);
            const double sech = 1.0 / cosh(w[1]);
            axial(rho, -rho / tanh(w[0]), -rho * tanh(w[1]), -a * csch * csch * tanh(w[1]),
                  a / tanh(w[0]) * sech * sech);
            return j;
        }
        case Family::OblateSpheroidal: {
            const double rho = a / (sin(w[0]) * cosh(w[1]));
            const double csc = 1.0 / sin(w[0]);
            const double sech = 1.0 / cosh(w[1]);
            axial(rho, -rho / std::tan(w[0]), -rho * tanh(w[1]), -a * csc * csc * tanh(w[1]),
                  a / std::tan(w[0]) * sech * sech);
            return j;
        }
        case Family::Parabolic: {
            const double rho = exp(w[0] + w[1]);
            axial(rho, rho, rho, exp(2 * w[0]), -exp(2 * w[1]));
            return j;
        }
        case Family::Paraboloidal: {
            const double c1 = cosh(w[0]), s1 = sinh(w[0]);
            const double c2 = cos(w[1]), s2 = sin(w[1]);
            const double c3 = cosh(w[2]), s3 = sinh(w[2]);
            j << 2 * a * s1 * c2 * s3, -2 * a * c1 * s2 * s3, 2 * a * c1 * c2 * c3,
                 2 * a * c1 * s2 * c3, 2 * a * s1 * c2 * c3, 2 * a * s1 * s2 * s3,
                 a * sinh(2 * w[0]), -a * sin(2 * w[1]), -a * sinh(2 * w[2]);
            return j;
        }
        case Family::Ellipsoidal: {
            const auto e = elliptic_terms(sys, w);
            const double k2 = sys.k() * sys.k();
            const double kp2 = sys.k_prime() * sys.k_prime();
            const auto& [sn1, cn1, dn1] = e.e1;
            const auto& [sn2, cn2, dn2] = e.e2;
            const auto& [sn3, cn3, dn3] = e.e3;
            const double is = 1.0 / sn1;
            const double is2 = is * is;
            j << -a * dn2 * sn3 * cn1 * dn1 * is2, -a * kp2 * sn2 * cn2 * sn3 * is, a * dn2 * cn3 * dn3 * is,
                 -a * cn1 * cn2 * cn3 * is2, -a * dn1 * is * sn2 * dn2 * cn3, -a * dn1 * is * cn2 * sn3 * dn3,
                 -a * dn1 * sn2 * dn3 * is2, a * cn1 * is * cn2 * dn2 * dn3, -a * k2 * cn1 * is * sn2 * sn3 * cn3;
            return j;
        }
        case Family::Conical: {
            const auto [sn2, cn2, dn2] = specialfn::jacobi_sn_cn_dn(w[1], sys.k_prime());
            const auto [sn3, cn3, dn3] = specialfn::jacobi_sn_cn_dn(w[2], sys.k());
            const double k2 = sys.k() * sys.k();
            const double kp2 = sys.k_prime() * sys.k_prime();
            const double iw = 1.0 / w[0];
            const Vec3 z = Vec3(dn2 * sn3, cn2 * cn3, sn2 * dn3) * iw;
            j.col(0) = -z * iw;
            j.col(1) = Vec3(-kp2 * sn2 * cn2 * sn3, -sn2 * dn2 * cn3, cn2 * dn2 * dn3) * iw;
            j.col(2) = Vec3(dn2 * cn3 * dn3, -cn2 * sn3 * dn3, -k2 * sn2 * sn3 * cn3) * iw;
            return j;
        }
    }
    return j;
}

bool is_singular(const Mat3& j) {
    const double det = j.determinant();
    const double scale = j.col(0).norm() * j.col(1).norm() * j.col(2).norm();
    return !std::isfinite(det) || std::abs(det) <= 1e-14 || std::abs(det) < 1e-10 * scale;
}

OmegaPoint seed_search(const CoordSystem& sys, const Vec3& z, std::array<double, 3> lo, std::array<double, 3> hi,
                       std::array<int, 3> counts) {
    OmegaPoint best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < counts[0]; ++i) {
        for (int j = 0; j < counts[1]; ++j) {
            for (int m = 0; m < counts[2]; ++m) {
                OmegaPoint w(lo[0] + (hi[0] - lo[0]) * (i + 0.5) / counts[0],
                             lo[1] + (hi[1] - lo[1]) * (j + 0.5) / counts[1],
                             lo[2] + (hi[2] - lo[2]) * (m + 0.5) / counts[2]);
                if (!domain_violation(sys, w, 0.0).empty()) continue;
                const double d = (z_raw(sys, w) - z).squaredNorm();
                if (d < best_dist) {
                    best_dist = d;
                    best = w;
                }
            }
        }
    }
    return best;
}

/// One extra Newton step after convergence, kept only if it lowers the residual.
void polish(const CoordSystem& sys, const Vec3& z, OmegaPoint& w, Vec3& residual) {
    const Mat3 j = jacobian_raw(sys, w);
    if (is_singular(j)) return;
    const OmegaPoint trial(w.vec() - j.partialPivLu().solve(residual));
    if (!domain_violation(sys, trial, 0.0).empty()) return;
    const Vec3 r = z_raw(sys, trial) - z;
    if (r.norm() < residual.norm()) {
        w = trial;
        residual = r;
    }
}

}  // namespace

CoordSystem::CoordSystem(Family family, double a, double k, int z3_shift)
    : family_(family), a_(a), k_(k), z3_shift_(z3_shift) {
    const int idx = static_cast<int>(family);
    if (idx < 1 || idx > kFamilyCount) {
        throw DomainError("unknown coordinate family index " + std::to_string(idx));
    }
    if (uses_a() && !(a > 0.0 && std::isfinite(a))) {
        throw DomainError(family_name(family) + ": parameter a must be positive, got " + std::to_string(a));
    }
    if (uses_k()) {
        const specialfn::EllipticModulus modulus(k);
        k_prime_ = modulus.k_prime;
        quarter_k_ = specialfn::complete_elliptic_K(k_);
        quarter_k_prime_ = specialfn::complete_elliptic_K(k_prime_);
    }
    if (z3_shift != 0 && (family != Family::ProlateSpheroidal || std::abs(z3_shift) != 1)) {
        throw DomainError("z3 shift variant exists only for the prolate spheroidal family, with shift +-1");
    }
}

CoordSystem CoordSystem::from_name(const std::string& name, double a, double k, int z3_shift) {
    return CoordSystem(family_from_name(name), a, k, z3_shift);
}

SplitClass CoordSystem::split_class() const {
    const int idx = index();
    if (idx == 1) return SplitClass::FullySplit;
    if (idx <= 4) return SplitClass::PartiallySplit;
    return SplitClass::NonSplit;
}

bool CoordSystem::uses_a() const {
    switch (family_) {
        case Family::EllipticCylindrical:
        case Family::ProlateSpheroidal:
        case Family::OblateSpheroidal:
        case Family::Paraboloidal:
        case Family::Ellipsoidal:
            return true;
        default:
            return false;
    }
}

bool CoordSystem::uses_k() const { return family_ == Family::Ellipsoidal || family_ == Family::Conical; }

std::string CoordSystem::name() const { return family_name(family_); }

std::string family_name(Family family) {
    switch (family) {
        case Family::Cartesian: return "cartesian";
        case Family::Cylindrical: return "cylindrical";
        case Family::ParabolicCylindrical: return "parabolic_cylindrical";
        case Family::EllipticCylindrical: return "elliptic_cylindrical";
        case Family::Spherical: return "spherical";
        case Family::ProlateSpheroidal: return "prolate_spheroidal";
        case Family::OblateSpheroidal: return "oblate_spheroidal";
        case Family::Parabolic: return "parabolic";
        case Family::Paraboloidal: return "paraboloidal";
        case Family::Ellipsoidal: return "ellipsoidal";
        case Family::Conical: return "conical";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    for (int i = 1; i <= kFamilyCount; ++i) {
        const auto f = static_cast<Family>(i);
        if (family_name(f) == name) return f;
    }
    throw DomainError("unknown coordinate family '" + name + "'");
}

std::vector<FamilyInfo> family_catalog() {
    return {
        {1, "cartesian", "-", "w1, w2, w3 in R", "fully split", ""},
        {2, "cylindrical", "-", "w1, w3 in R; 0 <= w2 < 2pi", "partially split", ""},
        {3, "parabolic_cylindrical", "-", "w1 > 0; w2, w3 in R", "partially split", ""},
        {4, "elliptic_cylindrical", "a > 0", "w1 > 0; -pi < w2 <= pi; w3 in R", "partially split", ""},
        {5, "spherical", "-", "w1 > 0; w2 in R; 0 <= w3 < 2pi", "non-split", ""},
        {6, "prolate_spheroidal", "a > 0", "w1 > 0; w2 in R; 0 <= w3 < 2pi", "non-split",
         "variant II: z3 = a (coth w1 tanh w2 +- 1), selected with z3_shift = +-1"},
        {7, "oblate_spheroidal", "a > 0", "0 < w1 < pi/2; w2 in R; 0 <= w3 < 2pi", "non-split", ""},
        {8, "parabolic", "-", "w1, w2 in R; 0 <= w3 <= 2pi", "non-split", ""},
        {9, "paraboloidal", "a > 0", "w1, w3 in R; 0 <= w2 < pi", "non-split", ""},
        {10, "ellipsoidal", "a > 0, modulus 0 < k < 1", "0 < w1 < K; -K' <= w2 <= K'; 0 <= w3 <= 4K", "non-split",
         ""},
        {11, "conical", "modulus 0 < k < 1", "w1 > 0; -K' <= w2 <= K'; 0 <= w3 <= 4K", "non-split", ""},
    };
}

void check_domain(const CoordSystem& sys, const OmegaPoint& omega, double margin) {
    if (const auto v = domain_violation(sys, omega, margin); !v.empty()) {
        throw DomainError(sys.name() + ": omega=" + describe(omega) + " violates " + v);
    }
}

Vec3 z_of_omega(const CoordSystem& sys, const OmegaPoint& omega) {
    check_domain(sys, omega);
    return z_raw(sys, omega);
}

Mat3 jacobian(const CoordSystem& sys, const OmegaPoint& omega) {
    check_domain(sys, omega);
    Mat3 j = jacobian_raw(sys, omega);
    if (is_singular(j)) {
        throw SingularityError(sys.name() + ": singular Jacobian at omega=" + describe(omega));
    }
    return j;
}

OmegaPoint omega_of_z(const CoordSystem& sys, const Vec3& z, const OmegaPoint& guess, const NewtonOptions& options) {
    if (!z.allFinite()) {
        throw DomainError("omega_of_z: non-finite target point");
    }
    OmegaPoint w = guess;
    if (!domain_violation(sys, w, 0.0).empty()) {
        throw DomainError(sys.name() + ": Newton guess " + describe(w) + " outside the coordinate domain");
    }
    const double scale = std::max(1.0, z.norm());
    Vec3 residual = z_raw(sys, w) - z;
    for (int it = 0; it < options.max_iterations; ++it) {
        if (residual.norm() <= options.tolerance * scale) {
            polish(sys, z, w, residual);
            check_domain(sys, w);
            return w;
        }
        const Mat3 j = jacobian_raw(sys, w);
        if (is_singular(j)) {
            throw SingularityError(sys.name() + ": singular Jacobian during Newton inversion at " + describe(w));
        }
        const Vec3 step = j.partialPivLu().solve(residual);
        double factor = 1.0;
        bool accepted = false;
        for (int h = 0; h <= options.max_halvings; ++h, factor *= 0.5) {
            const OmegaPoint trial(w.vec() - factor * step);
            if (!domain_violation(sys, trial, 0.0).empty()) continue;
            const Vec3 r = z_raw(sys, trial) - z;
            if (r.norm() < residual.norm() || h == options.max_halvings) {
                w = trial;
                residual = r;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw ConvergenceError(sys.name() + ": Newton step left the domain at " + describe(w));
        }
        if (step.norm() * factor <= 1e-15 * (1.0 + w.vec().norm()) &&
            residual.norm() <= 1e3 * options.tolerance * scale) {
            check_domain(sys, w);
            return w;
        }
    }
    if (residual.norm() <= 1e3 * options.tolerance * scale) {
        check_domain(sys, w);
        return w;
    }
    throw ConvergenceError(sys.name() + ": Newton inversion did not converge in " +
                           std::to_string(options.max_iterations) + " iterations (residual " +
                           std::to_string(residual.norm()) + ")");
}

OmegaPoint initial_guess(const CoordSystem& sys, const Vec3& z) {
    const double a = sys.a();
    const double rho = std::hypot(z.x(), z.y());
    const double phi = std::atan2(z.y(), z.x());
    const double r = z.norm();
    switch (sys.family()) {
        case Family::Cartesian:
            return OmegaPoint(z);
        case Family::Cylindrical:
            return {std::log(rho), phi, z.z()};
        case Family::ParabolicCylindrical: {
            const auto s = std::sqrt(2.0 * std::complex<double>(z.x(), z.y()));
            return {s.real(), s.imag(), z.z()};
        }
        case Family::EllipticCylindrical: {
            auto s = std::acosh(std::complex<double>(z.x(), z.y()) / a);
            if (s.real() < 0) s = -s;
            return {s.real(), s.imag(), z.z()};
        }
        case Family::Spherical:
            return {1.0 / r, std::atanh(z.z() / r), phi};
        case Family::ProlateSpheroidal: {
            const double z3 = z.z() - a * sys.z3_shift();
            const double d1 = std::hypot(rho, z3 - a);
            const double d2 = std::hypot(rho, z3 + a);
            const double xi = (d1 + d2) / (2 * a);
            const double eta = std::clamp((d2 - d1) / (2 * a), -1.0 + 1e-15, 1.0 - 1e-15);
            return {std::atanh(1.0 / xi), std::atanh(eta), phi};
        }
        case Family::OblateSpheroidal: {
            const double f = std::sqrt((a * a - r * r) * (a * a - r * r) + 4 * a * a * z.z() * z.z());
            const double xi = std::sqrt(std::max(0.0, (r * r - a * a + f) / (2 * a * a)));
            const double eta = std::clamp(z.z() / (a * xi), -1.0 + 1e-15, 1.0 - 1e-15);
            return {std::atan2(1.0, xi), std::atanh(eta), phi};
        }
        case Family::Parabolic: {
            const double up = z.z() >= 0 ? r + z.z() : rho * rho / (r - z.z());
            const double down = z.z() >= 0 ? rho * rho / (r + z.z()) : r - z.z();
            return {0.5 * std::log(up), 0.5 * std::log(down), phi};
        }
        case Family::Paraboloidal: {
            const double span = 0.5 * std::acosh(1.0 + 2.0 * z.norm() / a) + 0.5;
            return seed_search(sys, z, {-span, 0.0, -span}, {span, kPi, span}, {24, 24, 24});
        }
        case Family::Ellipsoidal:
            return seed_search(sys, z, {0.0, -sys.quarter_period_prime(), 0.0},
                               {sys.quarter_period(), sys.quarter_period_prime(), 4 * sys.quarter_period()},
                               {16, 16, 32});
        case Family::Conical: {
            const double w1 = 1.0 / r;
            OmegaPoint seed = seed_search(sys, z, {w1, -sys.quarter_period_prime(), 0.0},
                                          {w1, sys.quarter_period_prime(), 4 * sys.quarter_period()}, {1, 32, 64});
            seed[0] = w1;
            return seed;
        }
    }
    return OmegaPoint(z);
}

OmegaPoint omega_of_z(const CoordSystem& sys, const Vec3& z) { return omega_of_z(sys, z, initial_guess(sys, z)); }

Vec3 eikonal(const CoordSystem& sys, const OmegaPoint& w, const Vec3& scales) {
    check_domain(sys, w);
    for (int i = 0; i < 3; ++i) {
        if (scales[i] == 0.0 || !std::isfinite(scales[i])) {
            throw DomainError("eikonal: dilatation scale l" + std::to_string(i + 1) + " must be nonzero");
        }
    }
    const double h1 = 1.0 / (scales[0] * scales[0]);
    const double h3 = 1.0 / (scales[2] * scales[2]);
    const double a2 = sys.a() * sys.a();
    switch (sys.family()) {
        case Family::Cartesian:
            return {h1, 1.0 / (scales[1] * scales[1]), h3};
        case Family::Cylindrical: {
            const double q = h1 * exp(-2 * w[0]);
            return {q, q, h3};
        }
        case Family::ParabolicCylindrical: {
            const double q = h1 / (w[0] * w[0] + w[1] * w[1]);
            return {q, q, h3};
        }
        case Family::EllipticCylindrical: {
            const double q = h1 / (a2 * (cosh(w[0]) * cosh(w[0]) - cos(w[1]) * cos(w[1])));
            return {q, q, h3};
        }
        case Family::Spherical: {
            const double w2 = w[0] * w[0];
            const double c = cosh(w[1]);
            return {h1 * w2 * w2, h1 * w2 * c * c, h1 * w2 * c * c};
        }
        case Family::ProlateSpheroidal: {
            const double s2 = sinh(w[0]) * sinh(w[0]);
            const double c2 = cosh(w[1]) * cosh(w[1]);
            const double d = 1.0 / (1.0 / s2 + 1.0 / c2);
            return Vec3(s2 * d, c2 * d, s2 * c2) * (h1 / a2);
        }
        case Family::OblateSpheroidal: {
            const double s2 = sin(w[0]) * sin(w[0]);
            const double c2 = cosh(w[1]) * cosh(w[1]);
            const double d = 1.0 / (1.0 / s2 - 1.0 / c2);
            return Vec3(s2 * d, c2 * d, s2 * c2) * (h1 / a2);
        }
        case Family::Parabolic: {
            const double e1 = exp(2 * w[0]);
            const double e2 = exp(2 * w[1]);
            const double s = e1 + e2;
            return {h1 / (e1 * s), h1 / (e2 * s), h1 / (e1 * e2)};
        }
        case Family::Paraboloidal: {
            const double p = cosh(2 * w[0]) - cos(2 * w[1]);
            const double q = cosh(2 * w[0]) + cosh(2 * w[2]);
            const double r = cos(2 * w[1]) + cosh(2 * w[2]);
            return Vec3(1.0 / (p * q), 1.0 / (p * r), 1.0 / (q * r)) * (h1 / a2);
        }
        case Family::Ellipsoidal: {
            const auto e = elliptic_terms(sys, w);
            const double x = e.e1.dn * e.e1.dn / (e.e1.sn * e.e1.sn);
            const double y = sys.k_prime() * sys.k_prime() * e.e2.cn * e.e2.cn;
            const double z = sys.k() * sys.k() * e.e3.cn * e.e3.cn;
            return Vec3(1.0 / ((x - y) * (x + z)), 1.0 / ((x - y) * (y + z)), 1.0 / ((x + z) * (y + z))) *
                   (h1 / a2);
        }
        case Family::Conical: {
            const auto e2 = specialfn::jacobi_sn_cn_dn(w[1], sys.k_prime());
            const auto e3 = specialfn::jacobi_sn_cn_dn(w[2], sys.k());
            const double y = sys.k_prime() * sys.k_prime() * e2.cn * e2.cn;
            const double z = sys.k() * sys.k() * e3.cn * e3.cn;
            const double w2 = w[0] * w[0];
            const double q = h1 * w2 / (y + z);
            return {h1 * w2 * w2, q, q};
        }
    }
    return Vec3::Zero();
}

Vec3 stackel_row(const CoordSystem& sys, int row, double u) {
    if (row < 0 || row > 2) {
        throw DomainError("stackel_row: row index must be 0, 1 or 2");
    }
    const double a = sys.a();
    const double a2 = a * a;
    const auto pick = [row](Vec3 r0, Vec3 r1, Vec3 r2) { return row == 0 ? r0 : (row == 1 ? r1 : r2); };
    const Vec3 e3(0, 0, 1);
    switch (sys.family()) {
        case Family::Cartesian:
            return Mat3::Identity().row(row).transpose();
        case Family::Cylindrical:
            return pick({exp(2 * u), -1, 0}, {0, 1, 0}, e3);
        case Family::ParabolicCylindrical:
            return pick({u * u, -1, 0}, {u * u, 1, 0}, e3);
        case Family::EllipticCylindrical:
            return pick({a2 * cosh(u) * cosh(u), 1, 0}, {-a2 * cos(u) * cos(u), -1, 0}, e3);
        case Family::Spherical: {
            if (row == 0) return {std::pow(u, -4), -std::pow(u, -2), 0};
            if (row == 1) return {0, 1.0 / (cosh(u) * cosh(u)), -1};
            return e3;
        }
        case Family::ProlateSpheroidal: {
            if (row == 0) {
                const double s2 = 1.0 / (sinh(u) * sinh(u));
                return {a2 * s2 * s2, -s2, -1};
            }
            if (row == 1) {
                const double c2 = 1.0 / (cosh(u) * cosh(u));
                return {a2 * c2 * c2, c2, -1};
            }
            return e3;
        }
        case Family::OblateSpheroidal: {
            if (row == 0) {
                const double s2 = 1.0 / (sin(u) * sin(u));
                return {a2 * s2 * s2, -s2, 1};
            }
            if (row == 1) {
                const double c2 = 1.0 / (cosh(u) * cosh(u));
                return {-a2 * c2 * c2, c2, -1};
            }
            return e3;
        }
        case Family::Parabolic:
            return pick({exp(4 * u), -exp(2 * u), -1}, {exp(4 * u), exp(2 * u), -1}, e3);
        case Family::Paraboloidal: {
            if (row == 0) return {a2 * cosh(2 * u) * cosh(2 * u), -a * cosh(2 * u), -1};
            if (row == 1) return {-a2 * cos(2 * u) * cos(2 * u), a * cos(2 * u), 1};
            return {a2 * cosh(2 * u) * cosh(2 * u), a * cosh(2 * u), -1};
        }
        case Family::Ellipsoidal: {
            if (row == 0) {
                const auto e = specialfn::jacobi_sn_cn_dn(u, sys.k());
                const double x = e.dn * e.dn / (e.sn * e.sn);
                return {a2 * x * x, -x, 1};
            }
            if (row == 1) {
                const auto e = specialfn::jacobi_sn_cn_dn(u, sys.k_prime());
                const double y = sys.k_prime() * sys.k_prime() * e.cn * e.cn;
                return {-a2 * y * y, y, -1};
            }
            const auto e = specialfn::jacobi_sn_cn_dn(u, sys.k());
            const double z = sys.k() * sys.k() * e.cn * e.cn;
            return {a2 * z * z, z, 1};
        }
        case Family::Conical: {
            if (row == 0) return {std::pow(u, -4), -std::pow(u, -2), 0};
            if (row == 1) {
                const auto e = specialfn::jacobi_sn_cn_dn(u, sys.k_prime());
                return {0, sys.k_prime() * sys.k_prime() * e.cn * e.cn, -1};
            }
            const auto e = specialfn::jacobi_sn_cn_dn(u, sys.k());
            return {0, sys.k() * sys.k() * e.cn * e.cn, 1};
        }
    }
    return Vec3::Zero();
}

Mat3 stackel_matrix(const CoordSystem& sys, const OmegaPoint& omega) {
    check_domain(sys, omega);
    Mat3 s;
    for (int a = 0; a < 3; ++a) {
        s.row(a) = stackel_row(sys, a, omega[a]).transpose();
    }
    return s;
}

Vec3 T_functions(const CoordSystem& sys, const Vec3& scales) {
    for (int i = 0; i < 3; ++i) {
        if (scales[i] == 0.0) {
            throw DomainError("T_functions: dilatation scale l" + std::to_string(i + 1) + " must be nonzero");
        }
    }
    const double t1 = 1.0 / (scales[0] * scales[0]);
    switch (sys.split_class()) {
        case SplitClass::FullySplit:
            return {t1, 1.0 / (scales[1] * scales[1]), 1.0 / (scales[2] * scales[2])};
        case SplitClass::PartiallySplit:
            return {t1, 0.0, 1.0 / (scales[2] * scales[2])};
        case SplitClass::NonSplit:
            return {t1, 0.0, 0.0};
    }
    return Vec3::Zero();
}

}  // namespace pauli_sep::coords
