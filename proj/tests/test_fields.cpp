#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pauli_sep/catalog.hpp"
#include "pauli_sep/fields.hpp"

using namespace pauli_sep;
using namespace pauli_sep::fields;
using frame::EulerFrame;

namespace {

const TimeFunction kOne = TimeFunction::constant(1.0);
const TimeFunction kZero = TimeFunction::constant(0.0);

EulerFrame moving_cartesian() {
    return EulerFrame(coords::CoordSystem(coords::Family::Cartesian), TimeFunction::sinusoid(0.5, 1.1, 0.2, 0.0),
                      TimeFunction::linear(0.2, 0.7), TimeFunction::sinusoid(0.3, 0.8, 0.0, 1.0),
                      {TimeFunction::exponential(1.0, 0.3), TimeFunction::sinusoid(0.2, 1.0, 0.0, 1.0),
                       TimeFunction::polynomial({1.0, 0.1, 0.05})},
                      {TimeFunction::linear(0.0, 0.4), TimeFunction::sinusoid(0.3, 2.0, 0.0, 0.0),
                       TimeFunction::polynomial({0.1, 0.0, 0.2})},
                      frame::TimeWindow{0.0, 2.0});
}

Vec3 fd_curl(const std::function<Vec3(const Vec3&)>& A, const Vec3& x, double h = 1e-3) {
    Mat3 d;  // d(i, j) = dA_i / dx_j
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        d.col(j) = (A(x + e) - A(x - e)) / (2 * h);
    }
    return {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
}

}  // namespace

TEST_CASE("magnetic field of simple frames") {
    const auto sys = coords::CoordSystem(coords::Family::Cartesian);
    const EulerFrame rot(sys, TimeFunction::linear(0.0, -1.7), kZero, kZero, {kOne, kOne, kOne}, {kZero, kZero, kZero});
    CHECK((magnetic_field(rot, 0.3) - Vec3(0, 0, 1.7)).norm() < 1e-15);
    const EulerFrame fixed(sys, TimeFunction::constant(0.4), TimeFunction::constant(1.0), TimeFunction::constant(0.3),
                           {kOne, kOne, kOne}, {kZero, kZero, kZero});
    CHECK(magnetic_field(fixed, 0.9).norm() == 0.0);
}

TEST_CASE("vector potential and its square") {
    const double c = 1.3;
    CHECK((vector_potential(Vec3(0, 0, c), Vec3(1, 0, 0)) - Vec3(0, c / 2, 0)).norm() < 1e-16);
    CHECK(vector_potential(Vec3(1, 2, 3), Vec3(2, 4, 6)).norm() < 1e-15);
    CHECK(A_squared(Vec3(0, 0, c), Vec3(1, 0, 0)) == doctest::Approx(c * c / 4));
    CHECK(A_squared(Vec3(1, 2, 3), Vec3::Zero()) == 0.0);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int n = 0; n < 100; ++n) {
        const Vec3 h(u(rng), u(rng), u(rng)), x(u(rng), u(rng), u(rng));
        CHECK(std::abs(A_squared(h, x) - vector_potential(h, x).squaredNorm()) < 1e-13);
        const auto A = [&](const Vec3& y) { return vector_potential(h, y); };
        CHECK((fd_curl(A, x) - h).norm() < 1e-8);
        double div = 0.0;
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = 1e-3;
            div += (A(x + e)[j] - A(x - e)[j]) / 2e-3;
        }
        CHECK(std::abs(div) < 1e-8);
    }
}

TEST_CASE("P function") {
    const auto sys = coords::CoordSystem(coords::Family::Cartesian);
    const EulerFrame stat(sys, kZero, kZero, kZero, {TimeFunction::constant(2.0), kOne, kOne},
                          {TimeFunction::constant(0.3), kZero, kZero});
    CHECK(P_function(stat, 0.4, Vec3(1, 2, 3)) == 0.0);
    const EulerFrame drift(sys, kZero, kZero, kZero, {kOne, kOne, kOne}, {TimeFunction::linear(0, 1), kZero, kZero});
    CHECK(P_function(drift, 0.4, Vec3(1, 0, 0)) == doctest::Approx(1.0));

    const auto f = moving_cartesian();
    const double t = 0.7;
    const Vec3 xp(0.3, -0.8, 1.1);
    double expected = 0.0;
    for (int a = 0; a < 3; ++a) {
        const Jet l = f.scales()[a].jet(t);
        const Jet v = f.shifts()[a].jet(t);
        expected += l.d2 / l.value * xp[a] * xp[a] + 2 * (l.value * v.d2 + 2 * l.d1 * v.d1) * xp[a] +
                    l.value * l.value * v.d1 * v.d1;
    }
    CHECK(P_function(f, t, xp) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("S phase and its gradient") {
    const auto sys = coords::CoordSystem(coords::Family::Cartesian);
    const EulerFrame growing(sys, kZero, kZero, kZero, {TimeFunction::exponential(1.0, 1.0), kOne, kOne},
                             {kZero, kZero, kZero});
    CHECK(S_phase(growing, 0.37, Vec3(2, 0, 0)) == doctest::Approx(1.0));

    const auto f = moving_cartesian();
    const double t = 1.1, h = 1e-3;
    const Vec3 x(0.4, 0.2, -0.7);
    const auto S = [&](const Vec3& y) { return S_phase(f, t, frame::x_prime(f, t, y)); };
    Vec3 grad;
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        grad[j] = (S(x + e) - S(x - e)) / (2 * h);
    }
    CHECK((grad - S_gradient(f, t, x)).norm() < 1e-8);

    const Mat3 O = frame::rotation_matrix(f, t);
    Mat3 Ldot_Linv = Mat3::Zero();
    Mat3 L = Mat3::Zero();
    Vec3 vdot;
    for (int a = 0; a < 3; ++a) {
        const Jet l = f.scales()[a].jet(t);
        Ldot_Linv(a, a) = l.d1 / l.value;
        L(a, a) = l.value;
        vdot[a] = f.shifts()[a].jet(t).d1;
    }
    const Vec3 rhs = O * Ldot_Linv * O.transpose() * x + O * L * vdot;
    CHECK((2.0 * grad - rhs).norm() < 1e-8);
}

TEST_CASE("scalar potential basics") {
    const auto sys = coords::CoordSystem(coords::Family::Cartesian);
    const auto id = EulerFrame::identity(sys);
    FCoefficients F;
    CHECK(scalar_potential(id, F, 0.2, Vec3(0.5, 1, -1)) == 0.0);
    const auto f = moving_cartesian();
    F.Fa0 = {ScalarFunction::linear(0.1, 0.3), ScalarFunction::constant(0.2), ScalarFunction::sinusoid(1, 1, 0, 0)};
    FCoefficients G = F;
    G.F00 = TimeFunction::constant(0.75);
    const Vec3 x(0.2, -0.4, 0.9);
    CHECK(scalar_potential(f, G, 0.5, x) - scalar_potential(f, F, 0.5, x) == doctest::Approx(-0.75));
}

TEST_CASE("proposition potential is reproduced and time independent") {
    const auto s = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int n = 0; n < 50; ++n) {
        const Vec3 x(u(rng), u(rng), u(rng));
        if (std::hypot(x.x(), x.y()) < 0.1) continue;
        const double ref = catalog::proposition_A0(1.0, 1.0, x);
        const double v0 = scalar_potential(s.frame, s.F, 0.0, x);
        CHECK(std::abs(v0 - ref) < 1e-9 * std::max(1.0, std::abs(ref)));
        for (double t : {0.25, 0.6, 0.95}) CHECK(std::abs(scalar_potential(s.frame, s.F, t, x) - v0) < 1e-9);
    }
}

TEST_CASE("gauge transformations") {
    ElectromagneticPotential pot;
    pot.eH = [](double) { return Vec3(0.1, -0.3, 0.8); };
    pot.eA = [&pot](double t, const Vec3& x) { return vector_potential(pot.eH(t), x); };
    pot.eA0 = [](double, const Vec3& x) { return x.x() * x.y(); };
    GaugeFunction zero{[](double, const Vec3&) { return 0.0; }, [](double, const Vec3&) { return Vec3::Zero().eval(); },
                       [](double, const Vec3&) { return 0.0; }};
    const Vec3 x(0.3, 0.7, -1.2);
    const auto same = gauge_transform(pot, zero);
    CHECK((same.eA(0.4, x) - pot.eA(0.4, x)).norm() == 0.0);
    CHECK(same.eA0(0.4, x) == pot.eA0(0.4, x));

    const double c = 2.5;
    GaugeFunction time_only{[c](double t, const Vec3&) { return c * t; },
                            [](double, const Vec3&) { return Vec3::Zero().eval(); },
                            [c](double, const Vec3&) { return c; }};
    const auto shifted = gauge_transform(pot, time_only);
    CHECK((shifted.eA(0.4, x) - pot.eA(0.4, x)).norm() == 0.0);
    CHECK(shifted.eA0(0.4, x) == doctest::Approx(pot.eA0(0.4, x) - c));

    GaugeFunction g{[](double t, const Vec3& y) { return t * y.x() + std::sin(y.y() * y.z()); },
                    [](double t, const Vec3& y) {
                        return Vec3(t, y.z() * std::cos(y.y() * y.z()), y.y() * std::cos(y.y() * y.z()));
                    },
                    [](double, const Vec3& y) { return y.x(); }};
    const auto moved = gauge_transform(pot, g);
    const auto A = [&](const Vec3& y) { return pot.eA(0.4, y); };
    const auto B = [&](const Vec3& y) { return moved.eA(0.4, y); };
    CHECK((fd_curl(A, x) - fd_curl(B, x)).norm() < 1e-6);
}

TEST_CASE("Maxwell residuals") {
    ElectromagneticPotential flat;
    flat.eH = [](double) { return Vec3::Zero().eval(); };
    flat.eA = [](double, const Vec3&) { return Vec3::Zero().eval(); };
    flat.eA0 = [](double, const Vec3&) { return 3.0; };
    GridSpec grid;
    grid.times = {0.0, 0.5};
    const auto r0 = maxwell_residual(flat, grid);
    CHECK(r0.r_A0 == 0.0);
    CHECK(r0.r_A == 0.0);
    CHECK(r0.r_gauge_coupling == 0.0);

    catalog::CatalogParams p;
    p.a = 1.0;
    p.k = 1.0;
    const auto s2 = catalog::catalog_maxwell_check(catalog::CatalogCase::S2, p, catalog::catalog_default_grid(catalog::CatalogCase::S2, p));
    CHECK(s2.r_A0 < 1e-4);
    CHECK(s2.r_A < 1e-4);
    CHECK(s2.r_gauge_coupling < 1e-4);

    // Parallel and serial sweeps agree exactly.
    const auto pot = catalog::catalog_potential(catalog::CatalogCase::S3, p);
    const auto g3 = catalog::catalog_default_grid(catalog::CatalogCase::S3, p);
    const auto a = maxwell_residual(pot, g3);
    const auto b = maxwell_residual_serial(pot, g3);
    CHECK(a.r_A0 == b.r_A0);
    CHECK(a.r_A == b.r_A);
    CHECK(a.points == b.points);
    CHECK(a.r_A0 < 1e-4);

    // A time-dependent linear field has a non-zero Maxwell residual: d2A/dt2 != 0.
    ElectromagneticPotential accel;
    accel.eH = [](double t) { return Vec3(0, 0, t * t); };
    accel.eA = [&accel](double t, const Vec3& x) { return vector_potential(accel.eH(t), x); };
    accel.eA0 = [](double, const Vec3&) { return 0.0; };
    CHECK(maxwell_residual(accel, grid).r_A > 0.1);

    GridSpec touching = grid;
    Exclusion e;
    e.radius = 0.005;
    touching.exclusions.push_back(e);
    touching.points = {2, 2, 2};
    touching.lo = {-0.001, -0.001, -0.001};
    touching.hi = {0.006, 0.006, 0.006};
    CHECK_THROWS_AS(maxwell_residual(flat, touching), DomainError);
}
