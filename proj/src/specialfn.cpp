#include "pauli_sep/specialfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pauli_sep/types.hpp"

namespace pauli_sep::specialfn {

namespace {

constexpr double kLandenTolerance = 1e-15;
constexpr double kAgmTolerance = 1e-15;
constexpr double kModulusCeiling = 1.0 - 1e-12;
constexpr int kMaxLandenSteps = 40;

void check_modulus(double k) {
    if (!std::isfinite(k) || k < 0.0 || k > 1.0) {
        throw DomainError("elliptic modulus k=" + std::to_string(k) + " outside [0, 1]");
    }
}

double agm(double a, double b) {
    for (int i = 0; i < 64; ++i) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::abs(a - b) <= kAgmTolerance * a) {
            break;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

EllipticModulus::EllipticModulus(double modulus) : k(modulus), k_prime(0.0) {
    if (!std::isfinite(modulus) || modulus <= 0.0 || modulus >= 1.0) {
        throw DomainError("elliptic modulus must satisfy 0 < k < 1, got " + std::to_string(modulus));
    }
    // (1-k)(1+k) keeps k'^2 + k^2 = 1 accurate near k = 1.
    k_prime = std::sqrt((1.0 - modulus) * (1.0 + modulus));
}

double complete_elliptic_K(double k) {
    check_modulus(k);
    if (k > kModulusCeiling) {
        throw DomainError("complete_elliptic_K: k=" + std::to_string(k) +
                          " too close to the logarithmic singularity at k=1");
    }
    if (k == 0.0) {
        return std::numbers::pi / 2.0;
    }
    const double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return std::numbers::pi / (2.0 * agm(1.0, kp));
}

JacobiTriple jacobi_sn_cn_dn(double u, double k) {
    if (!std::isfinite(u)) {
        throw DomainError("jacobi_sn_cn_dn: non-finite argument");
    }
    check_modulus(k);
    if (k == 0.0) {
        return {std::sin(u), std::cos(u), 1.0};
    }
    if (k == 1.0) {
        const double sech = 1.0 / std::cosh(u);
        return {std::tanh(u), sech, sech};
    }

    if (k <= kModulusCeiling) {
        const double period = 4.0 * complete_elliptic_K(k);
        if (std::abs(u) > period) {
            u = std::remainder(u, period);
        }
    }

    std::array<double, kMaxLandenSteps + 1> a{};
    std::array<double, kMaxLandenSteps + 1> c{};
    a[0] = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    c[0] = k;
    int n = 0;
    while (std::abs(c[n]) > kLandenTolerance * a[n] && n < kMaxLandenSteps) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }

    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i > 0; --i) {
        phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    /// dn > 0 for real u; the cos-ratio form degenerates to 0/0 at odd multiples of K.
    const double dn = std::sqrt((1.0 - k * sn) * (1.0 + k * sn));
    return {sn, cn, dn};
}

}  // namespace pauli_sep::specialfn
