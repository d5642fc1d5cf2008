#include "pauli_sep/fields.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "pauli_sep/parallel.hpp"

namespace pauli_sep::fields {

namespace {

void require_scales(const std::array<Jet, 3>& l, const char* where) {
    for (int a = 0; a < 3; ++a) {
        if (l[a].value == 0.0) {
            throw DomainError(std::string(where) + ": scale l" + std::to_string(a + 1) + " is zero");
        }
    }
}

struct PointResidual {
    double r_A0 = 0.0;
    double r_A = 0.0;
    double gauge = 0.0;
    double laplacian = 0.0;
};

/// Central-difference derivatives of the potential at (t, x) with step h.
struct Derivatives {
    double lap_A0;
    Vec3 d2t_A;
    Vec3 lap_A;
    double dt_div_A;
    double dt_A0;
    double div_A;
    Vec3 grad_dt_A0;
    Vec3 grad_div_A;
};

Derivatives central(const ElectromagneticPotential& p, double t, const Vec3& x, double h) {
    Derivatives d{};
    const double a0 = p.eA0(t, x);
    const Vec3 a = p.eA(t, x);
    const auto div_at = [&](double tt, const Vec3& y) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = h;
            s += (p.eA(tt, y + e)[j] - p.eA(tt, y - e)[j]) / (2 * h);
        }
        return s;
    };
    const auto dt_A0_at = [&](const Vec3& y) { return (p.eA0(t + h, y) - p.eA0(t - h, y)) / (2 * h); };

    d.lap_A0 = 0.0;
    d.lap_A = Vec3::Zero();
    d.grad_dt_A0 = Vec3::Zero();
    d.grad_div_A = Vec3::Zero();
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = h;
        d.lap_A0 += (p.eA0(t, x + e) - 2 * a0 + p.eA0(t, x - e)) / (h * h);
        d.lap_A += (p.eA(t, x + e) - 2 * a + p.eA(t, x - e)) / (h * h);
        d.grad_dt_A0[j] = (dt_A0_at(x + e) - dt_A0_at(x - e)) / (2 * h);
        d.grad_div_A[j] = (div_at(t, x + e) - div_at(t, x - e)) / (2 * h);
    }
    d.d2t_A = (p.eA(t + h, x) - 2 * a + p.eA(t - h, x)) / (h * h);
    d.dt_div_A = (div_at(t + h, x) - div_at(t - h, x)) / (2 * h);
    d.dt_A0 = dt_A0_at(x);
    d.div_A = div_at(t, x);
    return d;
}

Derivatives combine(const Derivatives& coarse, const Derivatives& fine) {
    const auto r = [](auto c, auto f) { return (4.0 * f - c) / 3.0; };
    return {r(coarse.lap_A0, fine.lap_A0),         r(coarse.d2t_A, fine.d2t_A),
            r(coarse.lap_A, fine.lap_A),           r(coarse.dt_div_A, fine.dt_div_A),
            r(coarse.dt_A0, fine.dt_A0),           r(coarse.div_A, fine.div_A),
            r(coarse.grad_dt_A0, fine.grad_dt_A0), r(coarse.grad_div_A, fine.grad_div_A)};
}

PointResidual maxwell_point(const ElectromagneticPotential& p, double t, const Vec3& x, const MaxwellOptions& o) {
    Derivatives d = central(p, t, x, o.h);
    if (o.scheme == FdScheme::Richardson4) d = combine(d, central(p, t, x, 0.5 * o.h));
    // Box A0 - d/dt(dA0/dt + div A) = -Lap A0 - d/dt div A once the d2A0/dt2 terms cancel.
    PointResidual r;
    r.r_A0 = std::abs(-d.lap_A0 - d.dt_div_A);
    r.r_A = (d.d2t_A - d.lap_A + d.grad_dt_A0 + d.grad_div_A).cwiseAbs().maxCoeff();
    r.gauge = std::abs(d.dt_A0 + d.div_A);
    r.laplacian = std::abs(d.lap_A0);
    return r;
}

struct Sample {
    double t;
    Vec3 x;
};

std::vector<Sample> maxwell_samples(const GridSpec& grid, const MaxwellOptions& o) {
    if (grid.space != GridSpec::Space::Cartesian) {
        throw DomainError("maxwell_residual: grid must be a Cartesian box");
    }
    if (!(o.h > 0.0)) throw DomainError("maxwell_residual: step h must be positive");
    const double reach = 2.0 * o.h;  // widest stencil offset (mixed second differences)
    std::vector<Sample> out;
    for (const Vec3& x : grid.admissible_nodes()) {
        for (const auto& e : grid.exclusions) {
            if (e.distance(x) < reach) {
                throw DomainError("maxwell_residual: stencil at node touches an excluded singular locus");
            }
        }
        for (double t : grid.times) out.push_back({t, x});
    }
    if (out.empty()) throw DomainError("maxwell_residual: no admissible grid node");
    return out;
}

MaxwellReport reduce(const std::vector<Sample>& samples, const std::vector<PointResidual>& r) {
    MaxwellReport rep;
    rep.points = samples.size();
    double worst = -1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        rep.r_A0 = std::max(rep.r_A0, r[i].r_A0);
        rep.r_A = std::max(rep.r_A, r[i].r_A);
        rep.r_gauge_coupling = std::max(rep.r_gauge_coupling, r[i].gauge);
        rep.laplacian_A0 = std::max(rep.laplacian_A0, r[i].laplacian);
        const double m = std::max(r[i].r_A0, r[i].r_A);
        if (m > worst) {
            worst = m;
            rep.worst_point = samples[i].x;
            rep.worst_time = samples[i].t;
        }
    }
    return rep;
}

}  // namespace

Vec3 magnetic_field(const frame::EulerFrame& f, double t) {
    const Jet a = f.alpha().jet(t);
    const Jet b = f.beta().jet(t);
    const Jet g = f.gamma().jet(t);
    const double ca = std::cos(a.value), sa = std::sin(a.value);
    const double sg = std::sin(g.value), cg = std::cos(g.value);
    return {-g.d1 * ca - b.d1 * sa * sg, -g.d1 * sa + b.d1 * ca * sg, -a.d1 - b.d1 * cg};
}

Vec3 vector_potential(const Vec3& eH, const Vec3& x) { return 0.5 * eH.cross(x); }

double A_squared(const Vec3& H, const Vec3& x) {
    const double s1 = H[1] * x[2] - H[2] * x[1];
    const double s2 = H[2] * x[0] - H[0] * x[2];
    const double s3 = H[1] * x[0] - H[0] * x[1];
    return 0.25 * (s1 * s1 + s2 * s2 + s3 * s3);
}

double P_function(const frame::EulerFrame& f, double t, const Vec3& xp) {
    const auto l = f.scale_jets(t);
    const auto v = f.shift_jets(t);
    require_scales(l, "P_function");
    double p = 0.0;
    for (int a = 0; a < 3; ++a) {
        p += l[a].d2 / l[a].value * xp[a] * xp[a] + 2.0 * (l[a].value * v[a].d2 + 2.0 * l[a].d1 * v[a].d1) * xp[a] +
             l[a].value * l[a].value * v[a].d1 * v[a].d1;
    }
    return p;
}

double S_phase(const frame::EulerFrame& f, double t, const Vec3& xp) {
    const auto l = f.scale_jets(t);
    const auto v = f.shift_jets(t);
    require_scales(l, "S_phase");
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
        s += l[a].d1 / l[a].value * xp[a] * xp[a] + 2.0 * l[a].value * v[a].d1 * xp[a];
    }
    return 0.25 * s;
}

Vec3 S_gradient(const frame::EulerFrame& f, double t, const Vec3& x) {
    const auto l = f.scale_jets(t);
    const auto v = f.shift_jets(t);
    require_scales(l, "S_gradient");
    const Mat3 o = frame::rotation_matrix(f, t);
    const Vec3 xp = o.transpose() * x;
    Vec3 gp;
    for (int a = 0; a < 3; ++a) gp[a] = 0.5 * (l[a].d1 / l[a].value * xp[a] + l[a].value * v[a].d1);
    return o * gp;
}

double scalar_potential_at(const frame::EulerFrame& f, const FCoefficients& F, double t,
                           const coords::OmegaPoint& omega) {
    const auto l = f.scale_jets(t);
    require_scales(l, "scalar_potential");
    const Vec3 r = coords::eikonal(f.system(), omega, Vec3(l[0].value, l[1].value, l[2].value));
    const Vec3 x = frame::x_of_omega(f, t, omega);
    const Vec3 eH = magnetic_field(f, t);
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) sum += F.Fa0[a](omega[a]) * r[a];
    return sum - F.F00(t) - A_squared(eH, x) - 0.25 * P_function(f, t, frame::x_prime(f, t, x));
}

double scalar_potential(const frame::EulerFrame& f, const FCoefficients& F, double t, const Vec3& x,
                        const std::optional<coords::OmegaPoint>& hint) {
    const coords::OmegaPoint omega = hint ? frame::omega_of_x(f, t, x, *hint) : frame::omega_of_x(f, t, x);
    const auto l = f.scale_jets(t);
    require_scales(l, "scalar_potential");
    const Vec3 r = coords::eikonal(f.system(), omega, Vec3(l[0].value, l[1].value, l[2].value));
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) sum += F.Fa0[a](omega[a]) * r[a];
    return sum - F.F00(t) - A_squared(magnetic_field(f, t), x) - 0.25 * P_function(f, t, frame::x_prime(f, t, x));
}

ElectromagneticPotential frame_potential(const frame::EulerFrame& f, const FCoefficients& F) {
    ElectromagneticPotential p;
    p.eH = [f](double t) { return magnetic_field(f, t); };
    p.eA = [f](double t, const Vec3& x) { return vector_potential(magnetic_field(f, t), x); };
    p.eA0 = [f, F](double t, const Vec3& x) { return scalar_potential(f, F, t, x); };
    return p;
}

ElectromagneticPotential gauge_transform(const ElectromagneticPotential& pot, const GaugeFunction& g) {
    ElectromagneticPotential out;
    out.eH = pot.eH;
    out.eA = [a = pot.eA, grad = g.grad](double t, const Vec3& x) { return Vec3(a(t, x) + grad(t, x)); };
    out.eA0 = [a0 = pot.eA0, dt = g.dt](double t, const Vec3& x) { return a0(t, x) - dt(t, x); };
    return out;
}

MaxwellReport maxwell_residual(const ElectromagneticPotential& pot, const GridSpec& grid,
                               const MaxwellOptions& options) {
    const auto samples = maxwell_samples(grid, options);
    const auto r = parallel_map<PointResidual>(
        samples.size(), [&](std::size_t i) { return maxwell_point(pot, samples[i].t, samples[i].x, options); });
    return reduce(samples, r);
}

MaxwellReport maxwell_residual_serial(const ElectromagneticPotential& pot, const GridSpec& grid,
                                      const MaxwellOptions& options) {
    const auto samples = maxwell_samples(grid, options);
    const auto r = serial_map<PointResidual>(
        samples.size(), [&](std::size_t i) { return maxwell_point(pot, samples[i].t, samples[i].x, options); });
    return reduce(samples, r);
}

}  // namespace pauli_sep::fields
