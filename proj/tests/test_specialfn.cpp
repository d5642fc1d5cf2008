#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pauli_sep/specialfn.hpp"
#include "pauli_sep/types.hpp"

using namespace pauli_sep;
using namespace pauli_sep::specialfn;

namespace {

/// Incomplete integral F(phi, k) by composite Simpson.
double incomplete_F(double phi, double k) {
    const int n = 4000;
    const double h = phi / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double th = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w / std::sqrt(1.0 - k * k * std::sin(th) * std::sin(th));
    }
    return s * h / 3.0;
}

/// sn(u, k) = sin(am(u)) with am found by bisection on F(am, k) = u.
double sn_oracle(double u, double k) {
    double lo = 0.0, hi = std::numbers::pi;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (incomplete_F(mid, k) < u ? lo : hi) = mid;
    }
    return std::sin(0.5 * (lo + hi));
}

/// K(k) by the power series in k^2.
double K_series(double k) {
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 400; ++n) {
        const double r = (2.0 * n - 1.0) / (2.0 * n);
        term *= r * r * k * k;
        sum += term;
    }
    return std::numbers::pi / 2.0 * sum;
}

}  // namespace

TEST_CASE("sn matches quadrature oracle and frozen value") {
    const auto j = jacobi_sn_cn_dn(1.0, 0.7);
    CHECK(j.sn == doctest::Approx(sn_oracle(1.0, 0.7)).epsilon(1e-10));
    CHECK(j.sn == doctest::Approx(0.80380172005899359).epsilon(1e-13));
    CHECK(j.cn == doctest::Approx(0.59489729771633969).epsilon(1e-13));
    CHECK(j.dn == doctest::Approx(0.82668758879446089).epsilon(1e-13));

    const auto j2 = jacobi_sn_cn_dn(2.5, 0.9);
    CHECK(j2.sn == doctest::Approx(0.99536881575109430).epsilon(1e-13));
    CHECK(j2.cn == doctest::Approx(-0.096129707324344313).epsilon(1e-12));
    CHECK(j2.dn == doctest::Approx(0.44439300817014872).epsilon(1e-13));
}

TEST_CASE("limits k = 0 and k = 1") {
    for (double u : {-3.0, -0.4, 0.0, 0.9, 5.0}) {
        const auto t = jacobi_sn_cn_dn(u, 0.0);
        CHECK(t.sn == doctest::Approx(std::sin(u)).epsilon(1e-15));
        CHECK(t.cn == doctest::Approx(std::cos(u)).epsilon(1e-15));
        CHECK(t.dn == 1.0);
        const auto h = jacobi_sn_cn_dn(u, 1.0);
        CHECK(h.sn == doctest::Approx(std::tanh(u)).epsilon(1e-15));
        CHECK(h.cn == doctest::Approx(1.0 / std::cosh(u)).epsilon(1e-15));
        CHECK(h.dn == doctest::Approx(1.0 / std::cosh(u)).epsilon(1e-15));
    }
}

TEST_CASE("Pythagorean identities over four periods") {
    for (int ik = 1; ik <= 9; ++ik) {
        const double k = 0.1 * ik;
        const double K = complete_elliptic_K(k);
        for (int i = 0; i <= 400; ++i) {
            const double u = -4.0 * K + 8.0 * K * i / 400.0;
            const auto t = jacobi_sn_cn_dn(u, k);
            CHECK(std::abs(t.sn * t.sn + t.cn * t.cn - 1.0) < 1e-12);
            CHECK(std::abs(t.dn * t.dn - 1.0 + k * k * t.sn * t.sn) < 1e-12);
        }
    }
}

TEST_CASE("periodicity and quarter-period values") {
    const double k = 0.6;
    const double K = complete_elliptic_K(k);
    const auto q = jacobi_sn_cn_dn(K, k);
    CHECK(q.sn == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(q.cn) < 1e-12);
    CHECK(q.dn == doctest::Approx(std::sqrt(1 - k * k)).epsilon(1e-13));
    for (double u : {0.1, 0.7, 2.3}) {
        const auto a = jacobi_sn_cn_dn(u, k);
        const auto b = jacobi_sn_cn_dn(u + 4.0 * K, k);
        CHECK(a.sn == doctest::Approx(b.sn).epsilon(1e-12));
        CHECK(a.cn == doctest::Approx(b.cn).epsilon(1e-12));
        const auto c = jacobi_sn_cn_dn(-u, k);
        CHECK(c.sn == doctest::Approx(-a.sn).epsilon(1e-14));
        CHECK(c.cn == doctest::Approx(a.cn).epsilon(1e-14));
    }
}

TEST_CASE("derivative d sn/du = cn dn") {
    const double k = 0.45, h = 1e-5;
    for (double u : {-1.2, 0.3, 1.9}) {
        const double d = (jacobi_sn_cn_dn(u + h, k).sn - jacobi_sn_cn_dn(u - h, k).sn) / (2 * h);
        const auto t = jacobi_sn_cn_dn(u, k);
        CHECK(d == doctest::Approx(t.cn * t.dn).epsilon(1e-9));
    }
}

TEST_CASE("complete integral K") {
    CHECK(std::abs(complete_elliptic_K(0.0) - std::numbers::pi / 2.0) < 1e-14);
    CHECK(complete_elliptic_K(0.5) == doctest::Approx(K_series(0.5)).epsilon(1e-14));
    CHECK(complete_elliptic_K(0.5) == doctest::Approx(1.6857503548125960).epsilon(1e-14));
    CHECK(complete_elliptic_K(0.9) == doctest::Approx(2.2805491384227703).epsilon(1e-14));
    CHECK_THROWS_AS(complete_elliptic_K(1.0), DomainError);
    CHECK_THROWS_AS(complete_elliptic_K(-0.1), DomainError);
    CHECK_THROWS_AS(EllipticModulus(1.0), DomainError);
    CHECK(EllipticModulus(0.6).k_prime == doctest::Approx(0.8));
}
