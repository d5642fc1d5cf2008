#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "pauli_sep/catalog.hpp"
#include "pauli_sep/scenario.hpp"
#include "pauli_sep/separation.hpp"

using namespace pauli_sep;
using namespace pauli_sep::separation;
using frame::EulerFrame;

namespace {

const Complex I1(0.0, 1.0);

std::string scenario_path(const std::string& name) {
    return std::string(PAULI_SEP_SOURCE_DIR) + "/scenarios/" + name + ".json";
}

Scenario load(const std::string& name) { return load_scenario(scenario_path(name)).scenario; }

Scenario cartesian_rest() {
    Scenario s(EulerFrame::identity(coords::CoordSystem(coords::Family::Cartesian)));
    s.grid.lo = {-0.5, -0.5, -0.5};
    s.grid.hi = {0.5, 0.5, 0.5};
    s.grid.points = {3, 3, 3};
    s.grid.times = {0.0, 0.5};
    for (auto& ic : s.ic) ic.at = 0.0;
    return s;
}

ResidualOptions step(double h) {
    ResidualOptions o;
    o.h_x = h;
    o.h_t = h;
    return o;
}

double residual(const Scenario& s, double h = 1e-3) {
    const auto sol = solve(s);
    return pauli_residual(s, sol, step(h)).max_rel;
}

Vec3 random_lambda(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Vec3(u(rng), u(rng), u(rng));
}

}  // namespace

TEST_CASE("time factor") {
    auto s = cartesian_rest();
    for (double t : {0.0, 0.4, 1.0}) CHECK(std::abs(solve_time_factor(s, t) - 1.0) == 0.0);
    s.F.F00 = TimeFunction::constant(0.7);
    for (double t : {0.0, 0.4, 1.0}) CHECK(std::abs(solve_time_factor(s, t) - std::exp(I1 * 0.7 * t)) < 1e-13);
    const auto p = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    for (double t : {0.05, 0.3, 0.9}) CHECK(std::abs(std::abs(solve_time_factor(p, t)) - 1.0) < 1e-14);
    // Spherical scales are constant, so T_b is constant and the phase is linear in t.
    const double rate = p.F.F00(0.0) + effective_T_row(p, 0.0).dot(p.lambda);
    CHECK(std::abs(solve_time_factor(p, 0.8) - std::exp(I1 * rate * 0.8)) < 1e-12);
}

TEST_CASE("spatial factor closed forms") {
    const SpatialIC rest{Complex(1, 0), Complex(0, 0), 0.0};
    const SpatialFactor one([](double) { return 0.0; }, Interval{-1, 2}, rest);
    for (double w : {-1.0, -0.3, 0.77, 2.0}) CHECK(std::abs(one(w) - 1.0) < 1e-15);

    const double mu = 1.3;
    const SpatialFactor grow([mu](double) { return mu * mu; }, Interval{-1, 2}, rest);
    for (double w : {-1.0, -0.123, 0.5, 1.999}) {
        CHECK(std::abs(grow(w) - std::cosh(mu * w)) < 1e-8);
        CHECK(std::abs(grow.derivative(w) - mu * std::sinh(mu * w)) < 1e-8);
    }
    const SpatialFactor wave([mu](double) { return -mu * mu; }, Interval{-1, 2}, SpatialIC{0.0, mu, 0.0});
    for (double w : {-0.9, 0.0, 0.4321, 2.0}) CHECK(std::abs(wave(w) - std::sin(mu * w)) < 1e-8);
    CHECK(wave.resubstitution_residual() < 1e-8);

    // Through the scenario: Cartesian Staeckel rows are unit vectors.
    auto s = cartesian_rest();
    s.lambda = Vec3(mu * mu, 0.0, -mu * mu);
    const auto phi1 = solve_spatial_factor(s, 1, Interval{-1, 1}, rest);
    CHECK(std::abs(phi1(0.6) - std::cosh(mu * 0.6)) < 1e-8);
    const auto phi3 = solve_spatial_factor(s, 3, Interval{-1, 1}, SpatialIC{0.0, mu, 0.0});
    CHECK(std::abs(phi3(-0.7) - std::sin(-mu * 0.7)) < 1e-8);
    CHECK_THROWS(solve_spatial_factor(s, 4, Interval{-1, 1}, rest));

    // A coefficient singular inside the range.
    auto sph = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    CHECK_THROWS_AS(solve_spatial_factor(sph, 1, Interval{-0.5, 0.5}, rest), DomainError);
}

TEST_CASE("assembly") {
    auto s = cartesian_rest();
    const auto sol = solve(s);
    const Vec3 x(0.2, -0.1, 0.3);
    const Spinor2 psi = assemble_solution(sol, 0.3, x);
    CHECK(std::abs(psi[0] - 1.0) < 1e-14);
    CHECK(std::abs(psi[1]) < 1e-14);

    s.chi = Spinor2::Zero();
    CHECK(assemble_solution(solve(s), 0.3, x).norm() == 0.0);

    auto p = load("rotating_cylindrical");
    const auto base = solve(p);
    const Complex kappa(0.3, -1.7);
    auto q = p;
    q.chi = kappa * p.chi;
    const auto scaled = solve(q);
    const auto pts = scenario_points(p);
    for (std::size_t i = 0; i < pts.size(); i += 7) {
        const Spinor2 a = assemble_solution(base, pts[i].t, pts[i].x);
        const Spinor2 b = assemble_solution(scaled, pts[i].t, pts[i].x);
        CHECK((b - kappa * a).norm() < 1e-12 * (1.0 + a.norm()));
    }
}

TEST_CASE("residuals of the shipped scenarios") {
    for (const char* name : {"free_particle", "rotating_cylindrical", "proposition"}) {
        CAPTURE(name);
        const auto file = load_scenario(scenario_path(name));
        Scenario s = file.scenario;
        if (file.potential) s.eA0_override = closed_form_potential(*file.potential);
        const auto sol = solve(s);
        const double r1 = pauli_residual(s, sol, step(2e-3)).max_rel;
        const double r2 = pauli_residual(s, sol, step(1e-3)).max_rel;
        CHECK(r2 < 1e-4);
        // Second-order differences: halving h divides the residual by about four.
        CHECK(r1 / r2 > 3.0);
        CHECK(r1 / r2 < 5.0);
    }
}

TEST_CASE("separation constants are free") {
    std::mt19937_64 rng(2024);
    for (const char* name : {"free_particle", "rotating_cylindrical", "proposition"}) {
        CAPTURE(name);
        Scenario s = load(name);
        for (int n = 0; n < 5; ++n) {
            s.lambda = random_lambda(rng);
            CAPTURE(s.lambda.transpose());
            CHECK(residual(s) < 1e-4);
        }
    }
}

TEST_CASE("negative controls") {
    const Scenario p = load("proposition");
    auto shifted = p;
    shifted.corruption.lambda_shift = Vec3(0.3, 0.0, 0.0);
    CHECK(residual(shifted) > 1e-2);
    auto entry = p;
    entry.corruption.stackel_entry = Corruption::StackelEntry{1, 2, 0.5};
    CHECK(residual(entry) > 1e-2);
    auto phase = p;
    phase.corruption.q_phase = 0.3;
    CHECK(residual(phase) > 1e-2);
    CHECK(shifted.corruption.any());
    CHECK_FALSE(p.corruption.any());
}

TEST_CASE("gauge covariance") {
    const Scenario s = load("rotating_cylindrical");
    const auto sol = solve(s);
    const auto problem = scenario_problem(sol);
    const fields::GaugeFunction f{[](double t, const Vec3& x) { return t * x.x(); },
                                  [](double t, const Vec3&) { return Vec3(t, 0, 0); },
                                  [](double, const Vec3& x) { return x.x(); }};
    const auto moved = gauge_transform(problem, f);
    const auto pts = scenario_points(s);
    const auto a = pauli_residual(problem, pts);
    const auto b = pauli_residual(moved, pts);
    CHECK(a.max_rel < 1e-4);
    CHECK(std::abs(a.max_rel - b.max_rel) < 1e-6);

    const auto x = pts[3].x;
    const double t = pts[3].t;
    const Spinor2 psi0 = problem.psi(t, x, pts[3].omega);
    const Spinor2 psi1 = moved.psi(t, x, pts[3].omega);
    CHECK((psi1 - std::exp(I1 * t * x.x()) * psi0).norm() < 1e-14);
}

TEST_CASE("spin term is carried by U") {
    const Scenario s = load("proposition");
    const auto sol = solve(s);
    const auto problem = scenario_problem(sol);
    const auto pts = scenario_points(s);
    CHECK(pauli_residual(problem, pts).max_rel < 1e-4);

    // psi~ = U* psi solves the spin-free equation.
    PauliProblem spin_free = problem;
    spin_free.fields.eH = [](double) { return Vec3::Zero().eval(); };
    const auto eA = problem.fields.eA;
    const Vec3 h = problem.fields.eH(0.0);
    spin_free.fields.eA = [eA, h](double t, const Vec3& x) { return eA(t, x); };
    const auto& U = sol.propagator();
    spin_free.psi = [problem, &U](double t, const Vec3& x, const coords::OmegaPoint& w) -> Spinor2 {
        return U(t).adjoint() * problem.psi(t, x, w);
    };
    CHECK(pauli_residual(spin_free, pts).max_rel < 1e-4);

    // Without the transform the spin-free operator does not annihilate psi.
    PauliProblem untransformed = spin_free;
    untransformed.psi = problem.psi;
    CHECK(pauli_residual(untransformed, pts).max_rel > 1e-2);
    CHECK(h.norm() > 0.5);
}

TEST_CASE("serial and parallel residuals agree") {
    const Scenario s = load("proposition");
    const auto sol = solve(s);
    const auto problem = scenario_problem(sol);
    const auto pts = scenario_points(s);
    const auto a = pauli_residual(problem, pts);
    const auto b = pauli_residual_serial(problem, pts);
    CHECK(a.max_rel == b.max_rel);
    CHECK(a.mean_rel == b.mean_rel);
    CHECK(a.points == b.points);
}

TEST_CASE("commutativity") {
    const std::vector<ArgumentSample> samples{{0.1, 0.5, 0.7, 1.2}, {0.8, 1.1, -0.4, 2.0}};
    const std::vector<Vec3> lambdas{Vec3(0.3, -0.2, 1.0), Vec3(-1.0, 0.5, 0.25)};

    const auto p = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    const auto scalar = stackel_coefficient_forms(p);
    CHECK(commutativity_check(scalar, samples, lambdas).ok);

    SharedDirectionForm shared;
    for (int mu = 0; mu < 4; ++mu) {
        for (int al = 0; al < 4; ++al) {
            shared.F[mu][al] = ScalarFunction::linear(0.1 * mu, 0.2 * al);
            shared.G[mu][al] = ScalarFunction::sinusoid(1.0 + mu, 0.5 + al, 0.0, 0.1);
        }
    }
    shared.s = Vec3(0.3, -0.4, 0.5);
    const auto c1 = matrix_coefficient_forms(shared, samples);
    CHECK(commutativity_check(c1, samples, lambdas).ok);

    SharedProfileForm profile;
    for (int mu = 0; mu < 4; ++mu) {
        for (int al = 0; al < 4; ++al) profile.F[mu][al] = ScalarFunction::constant(mu == al ? 1.0 : 0.0);
        profile.G[mu] = ScalarFunction::exponential(1.0, 0.1 * mu);
    }
    profile.s = {Vec3::Zero(), Vec3(1, 0, 0), Vec3(0.2, 1, 0), Vec3(0, 0.3, 1)};
    const auto c2 = matrix_coefficient_forms(profile, samples);
    CHECK(commutativity_check(c2, samples, lambdas).ok);

    GeneralForm two_axis;
    for (int mu = 0; mu < 4; ++mu) {
        for (int al = 0; al < 4; ++al) {
            two_axis.F[mu][al] = ScalarFunction::constant(0.0);
            two_axis.G[mu][al] = ScalarFunction::constant(0.0);
        }
    }
    two_axis.s = {Vec3::UnitX(), Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    two_axis.G[1][0] = ScalarFunction::constant(1.0);
    two_axis.G[2][0] = ScalarFunction::linear(0.0, 1.0);
    two_axis.G[2][2] = ScalarFunction::constant(1.0);
    const auto bad = general_coefficient_form(two_axis);
    const auto rep = commutativity_check(bad, samples, lambdas);
    CHECK_FALSE(rep.ok);
    CHECK(rep.worst > 0.1);
    CHECK_THROWS_AS(matrix_coefficient_forms(two_axis, samples), ConstructionError);
}

TEST_CASE("scalar forms carry the Staeckel entries") {
    const auto p = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    const auto c = stackel_coefficient_forms(p);
    const coords::OmegaPoint w(0.9, 0.2, 1.4);
    const Mat3 S = coords::stackel_matrix(p.system(), w);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const Mat2C m = c.P[a + 1][b + 1](w[a]);
            CHECK(std::abs(m(0, 0) - S(a, b)) < 1e-14);
            CHECK(std::abs(m(0, 1)) == 0.0);
        }
    }
    const Vec3 T = coords::T_functions(p.system(), Vec3(1, 1, 1));
    for (int b = 0; b < 3; ++b) CHECK(std::abs(c.P[0][b + 1](0.4)(1, 1) - T[b]) < 1e-14);
}

TEST_CASE("rank condition") {
    const auto cart = EulerFrame::identity(coords::CoordSystem(coords::Family::Cartesian));
    CHECK(rank_check(cart, {RankSample{0.0, coords::OmegaPoint(0.1, 0.2, 0.3)}}).ok);

    for (int i = 1; i <= coords::kFamilyCount; ++i) {
        const coords::CoordSystem sys(static_cast<coords::Family>(i), 1.3, 0.6);
        const auto f = EulerFrame::identity(sys);
        std::vector<RankSample> samples;
        const auto zs = {Vec3(0.4, 0.7, 0.3), Vec3(-0.6, 0.2, 0.9), Vec3(0.35, -0.45, -0.8)};
        for (const Vec3& z : zs) samples.push_back({0.0, coords::omega_of_z(sys, z)});
        CAPTURE(i);
        CHECK(rank_check(f, samples).ok);
    }

    Scenario p = catalog::proposition_example(1.0, 1.0, 0.3, 0.2, 0.1);
    const std::vector<RankSample> samples{{0.2, coords::OmegaPoint(0.9, 0.2, 1.4)}};
    CHECK(rank_check(p, samples).ok);
    p.corruption.stackel_column_copy = Corruption::StackelColumnCopy{0, 1};
    const auto rep = rank_check(p, samples);
    CHECK_FALSE(rep.ok);
    CHECK(rep.min_rank == 2);

    Eigen::Matrix<double, 4, 3> m;
    m << 1, 2, 3, 2, 4, 6, 0, 0, 1, 1, 2, 0;
    CHECK(numerical_rank(m) == 2);
    m(3, 1) = 2.5;
    CHECK(numerical_rank(m) == 3);
}

TEST_CASE("fixed-potential frame") {
    const double c = 0.8;
    const spinor::FieldFunction axial = [c](double) { return Vec3(0, 0, c); };
    const auto table = fixed_potential_frame(axial, 3.0);
    CHECK(table.max_orthogonality_defect < 1e-9);
    for (std::size_t i = 0; i < table.times.size(); i += 250) {
        const double t = table.times[i];
        CHECK((table.rotations[i] - frame::rotation_matrix(-c * t, 0.0, 0.0)).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK((table.at(1.2345, axial) - frame::rotation_matrix(-c * 1.2345, 0.0, 0.0)).cwiseAbs().maxCoeff() < 1e-9);

    const spinor::FieldFunction none = [](double) { return Vec3::Zero().eval(); };
    const auto still = fixed_potential_frame(none, 1.0);
    for (const Mat3& O : still.rotations) CHECK((O - Mat3::Identity()).norm() == 0.0);

    const spinor::FieldFunction generic = [](double t) { return Vec3(0.3 * std::sin(t), 0.5, 0.2 * t); };
    const auto g = fixed_potential_frame(generic, 2.0);
    CHECK(g.max_orthogonality_defect < 1e-9);
    const double h = 1e-4;
    for (double t : {0.3, 1.0, 1.7}) {
        const Mat3 dO = (g.at(t + h, generic) - g.at(t - h, generic)) / (2 * h);
        const Mat3 rate = dO * g.at(t, generic).transpose();
        const Vec3 e = generic(t);
        Mat3 hat;
        hat << 0, -e.z(), e.y(), e.z(), 0, -e.x(), -e.y(), e.x(), 0;
        CHECK((rate + hat).cwiseAbs().maxCoeff() < 1e-7);
    }
    const auto angles = unwrapped_euler_angles(table);
    CHECK(angles.size() == table.times.size());
    CHECK(angles.back().alpha + angles.back().beta == doctest::Approx(-c * 3.0).epsilon(1e-9));
    CHECK_THROWS_AS(fixed_potential_frame([](double) { return Vec3(0, 0, 400); }, 1.0, 0.05), IntegrationError);
}

TEST_CASE("gauge reduction") {
    std::vector<Vec3> xs;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int n = 0; n < 12; ++n) xs.emplace_back(u(rng), u(rng), u(rng));

    const Vec3 h(0, 0, 1.4);
    const auto pure = [h](double, const Vec3& x) { return fields::vector_potential(h, x); };
    const auto r0 = gauge_reduce(pure, 0.0, xs);
    CHECK((r0.eH - h).norm() < 1e-12);
    CHECK(r0.defect < 1e-12);

    Mat3 sym;
    sym << 0.5, 0.1, 0.0, 0.1, -0.2, 0.3, 0.0, 0.3, 0.4;
    const Vec3 b(0.1, -0.2, 0.05);
    const auto mixed = [h, sym, b](double, const Vec3& x) { return (fields::vector_potential(h, x) + sym * x + b).eval(); };
    const auto r1 = gauge_reduce(mixed, 0.0, xs);
    CHECK((r1.eH - h).norm() < 1e-12);
    double expected = 0.0;
    for (const Vec3& x : xs) expected = std::max(expected, (sym * x + b).cwiseAbs().maxCoeff());
    CHECK(r1.defect == doctest::Approx(expected).epsilon(1e-10));

    const auto quadratic = [](double, const Vec3& x) { return Vec3(x.y() * x.y(), 0, 0); };
    CHECK_THROWS_AS(gauge_reduce(quadratic, 0.0, xs), NotSeparableError);
    CHECK_THROWS_AS(gauge_reduce(pure, 0.0, {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0), Vec3(2, 0, 0)}), DomainError);
}
