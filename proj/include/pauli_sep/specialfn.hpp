#pragma once

namespace pauli_sep::specialfn {

/// Modulus k of the Jacobi elliptic functions together with its complement k' = sqrt(1 - k^2).
struct EllipticModulus {
    double k;
    double k_prime;

    /// Throws DomainError unless 0 < k < 1.
    explicit EllipticModulus(double modulus);
};

struct JacobiTriple {
    double sn;
    double cn;
    double dn;
};

/// sn, cn, dn of real argument u and modulus k in [0, 1].
///
/// Uses the descending Landen (arithmetic-geometric mean) scheme; k = 0 and
/// k = 1 short-circuit to the trigonometric and hyperbolic limits. Arguments
/// beyond one real period are reduced modulo 4K first.
JacobiTriple jacobi_sn_cn_dn(double u, double k);

/// Complete elliptic integral of the first kind K(k) by the AGM.
/// Throws DomainError for k outside [0, 1 - 1e-12].
double complete_elliptic_K(double k);

}  // namespace pauli_sep::specialfn
