#include "pauli_sep/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <sstream>

namespace pauli_sep::catalog {

namespace {

double quadric(const Vec3& x) { return x.x() * x.x() + x.y() * x.y() - 2.0 * x.z() * x.z(); }

bool stationary(CatalogCase c) { return c != CatalogCase::NonStationary; }

[[noreturn]] void singular(CatalogCase c, const Vec3& x, const char* locus) {
    std::ostringstream os;
    os << "catalog case " << case_name(c) << ": x = (" << x.x() << ", " << x.y() << ", " << x.z() << ") lies on "
       << locus;
    throw DomainError(os.str());
}

double tolerance(const Vec3& x) { return 1e-12 * std::max(1.0, x.norm()); }

/// Legendre-type terms need x off the x3 axis and away from the origin.
void require_off_axis(CatalogCase c, const Vec3& x) {
    if (std::hypot(x.x(), x.y()) <= tolerance(x)) singular(c, x, "the x3 axis");
}

void require_off_origin(CatalogCase c, const Vec3& x) {
    if (x.norm() <= tolerance(x)) singular(c, x, "the origin");
}

double s5_terms(const CatalogParams& p, const Vec3& x) {
    const double a = p.a;
    const double r2 = x.squaredNorm();
    const double f = std::sqrt((a * a - r2) * (a * a - r2) + 4.0 * a * a * x.z() * x.z());
    if (f <= tolerance(x)) singular(CatalogCase::S5, x, "the focal ring r = a, x3 = 0");
    const double f1 = std::sqrt(std::max(0.0, (-a * a + r2 + f) / (2.0 * a * a)));
    if (f1 <= tolerance(x)) singular(CatalogCase::S5, x, "the focal disk x3 = 0, r < a");
    require_off_axis(CatalogCase::S5, x);
    const double arccot = std::atan(1.0 / f1);
    return 2.0 * p.a1 * a * f1 / f + 2.0 * p.a2 * x.z() / (f * f1) -
           2.0 * p.a3 * (a * f1 / f * arccot - x.z() / (f * f1) * std::atanh(x.z() / (a * f1)));
}

}  // namespace

std::string case_name(CatalogCase c) {
    switch (c) {
        case CatalogCase::NonStationary: return "nonstationary";
        case CatalogCase::S1: return "s1";
        case CatalogCase::S2: return "s2";
        case CatalogCase::S3: return "s3";
        case CatalogCase::S4: return "s4";
        case CatalogCase::S5: return "s5";
        case CatalogCase::S6: return "s6";
        case CatalogCase::S7: return "s7";
    }
    return "unknown";
}

CatalogCase case_from_name(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    for (CatalogCase c : all_cases()) {
        if (case_name(c) == lower) return c;
    }
    throw DomainError("unknown catalog case '" + name + "'");
}

std::vector<CatalogCase> all_cases() {
    return {CatalogCase::NonStationary, CatalogCase::S1, CatalogCase::S2, CatalogCase::S3,
            CatalogCase::S4,            CatalogCase::S5, CatalogCase::S6, CatalogCase::S7};
}

std::vector<std::string> case_parameters(CatalogCase c) {
    switch (c) {
        case CatalogCase::NonStationary: return {"A", "B", "k", "a1", "a2", "a3"};
        case CatalogCase::S1: return {"k", "a1", "a2", "a3"};
        case CatalogCase::S2: return {"k", "a"};
        case CatalogCase::S3:
        case CatalogCase::S6: return {"k", "a1", "a2", "a3"};
        case CatalogCase::S4:
        case CatalogCase::S5: return {"k", "a", "a1", "a2", "a3"};
        case CatalogCase::S7: return {"k", "q", "a", "a3"};
    }
    return {};
}

void check_params(CatalogCase c, const CatalogParams& p) {
    if (stationary(c) && p.k == 0.0) throw DomainError("catalog case " + case_name(c) + " requires k != 0");
    if ((c == CatalogCase::S4 || c == CatalogCase::S5) && !(p.a > 0.0)) {
        throw DomainError("catalog case " + case_name(c) + " requires a > 0");
    }
}

double catalog_quadratic_part(CatalogCase c, const CatalogParams& p, const Vec3& x) {
    switch (c) {
        case CatalogCase::NonStationary: return -0.5 * p.k * quadric(x);
        case CatalogCase::S6: return -p.k * p.k / 6.0 * quadric(x);
        case CatalogCase::S7: return -0.5 * p.q * quadric(x);
        default: return -p.k * p.k / 12.0 * quadric(x);
    }
}

double catalog_A0(CatalogCase c, const CatalogParams& p, const Vec3& x) {
    const double quad = catalog_quadratic_part(c, p, x);
    const double r = x.norm();
    switch (c) {
        case CatalogCase::NonStationary:
        case CatalogCase::S1:
            return quad + p.a1 * x.x() + p.a2 * x.y() + p.a3 * x.z();
        case CatalogCase::S2:
            require_off_origin(c, x);
            return p.a / r + quad;
        case CatalogCase::S3: {
            require_off_origin(c, x);
            require_off_axis(c, x);
            const double log = std::log((r + x.z()) / (r - x.z()));
            return quad + p.a1 / r + p.a2 * x.z() / (r * r * r) + p.a3 / (r * r) * (x.z() / (2.0 * r) * log - 1.0);
        }
        case CatalogCase::S4: {
            require_off_axis(c, x);
            const double xp = x.z() + p.a;
            const double xm = x.z() - p.a;
            const double rp = std::hypot(x.x(), x.y(), xp);
            const double rm = std::hypot(x.x(), x.y(), xm);
            return quad + p.a1 / rp + p.a2 / rm + p.a3 * (std::atanh(xp / rp) / rp - std::atanh(xm / rm) / rm);
        }
        case CatalogCase::S5:
            return quad + s5_terms(p, x);
        case CatalogCase::S6: {
            require_off_origin(c, x);
            require_off_axis(c, x);
            return quad + p.a1 / r + p.a2 * x.z() + p.a3 / r * std::log((r + x.z()) / (r - x.z()));
        }
        case CatalogCase::S7: {
            if (p.s7 == S7Form::Verbatim) {
                if (x.x() + x.y() <= 0.0) singular(c, x, "the half-space x1 + x2 <= 0");
                return quad + p.a * std::log(x.x() + x.y()) + p.a3 * x.z();
            }
            require_off_axis(c, x);
            return quad + p.a * std::log(x.x() * x.x() + x.y() * x.y()) + p.a3 * x.z();
        }
    }
    return 0.0;
}

double s5_complex_form(const CatalogParams& p, const Vec3& x) {
    s5_terms(p, x);  // same singular loci
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    const double rho2 = x.x() * x.x() + x.y() * x.y();
    const C xp = x.z() + i * p.a;
    const C xm = x.z() - i * p.a;
    const C rp = std::sqrt(rho2 + xp * xp);
    const C rm = std::sqrt(rho2 + xm * xm);
    const C value = (p.a1 + i * p.a2) / rp + (p.a1 - i * p.a2) / rm +
                    i * p.a3 * (std::atanh(xp / rp) / rp - std::atanh(xm / rm) / rm);
    return catalog_quadratic_part(CatalogCase::S5, p, x) + value.real();
}

Vec3 catalog_magnetic_field(CatalogCase c, const CatalogParams& p, double t) {
    if (c == CatalogCase::NonStationary) return {0.0, 0.0, p.A * t + p.B};
    return {0.0, 0.0, p.k};
}

std::vector<Exclusion> catalog_exclusions(CatalogCase c, const CatalogParams& p, double radius) {
    const auto sphere = [radius](const Vec3& center) {
        Exclusion e;
        e.kind = Exclusion::Kind::Sphere;
        e.center = center;
        e.radius = radius;
        return e;
    };
    Exclusion axis;
    axis.kind = Exclusion::Kind::AxisCylinder;
    axis.radius = radius;
    switch (c) {
        case CatalogCase::NonStationary:
        case CatalogCase::S1: return {};
        case CatalogCase::S2: return {sphere(Vec3::Zero())};
        case CatalogCase::S3:
        case CatalogCase::S6: return {sphere(Vec3::Zero()), axis};
        case CatalogCase::S4: return {sphere(Vec3(0, 0, -p.a)), sphere(Vec3(0, 0, p.a)), axis};
        case CatalogCase::S5: {
            Exclusion disk;
            disk.kind = Exclusion::Kind::Disk;
            disk.radius = radius;
            disk.disk_radius = p.a;
            return {disk, axis};
        }
        case CatalogCase::S7:
            if (p.s7 == S7Form::Amended) return {axis};
            return {};
    }
    return {};
}

GridSpec catalog_default_grid(CatalogCase c, const CatalogParams& p) {
    GridSpec g;
    g.space = GridSpec::Space::Cartesian;
    g.lo = {-2.0, -2.0, -2.0};
    g.hi = {2.0, 2.0, 2.0};
    g.points = {9, 9, 9};
    g.times = {0.0, 0.5};
    if (c == CatalogCase::S7 && p.s7 == S7Form::Verbatim) {
        g.lo = {0.6, 0.6, -1.0};
        g.hi = {2.0, 2.0, 1.0};
        g.points = {8, 8, 9};
    }
    g.exclusions = catalog_exclusions(c, p);
    return g;
}

fields::ElectromagneticPotential catalog_potential(CatalogCase c, const CatalogParams& p) {
    check_params(c, p);
    fields::ElectromagneticPotential pot;
    pot.eH = [c, p](double t) { return catalog_magnetic_field(c, p, t); };
    pot.eA = [c, p](double t, const Vec3& x) {
        return fields::vector_potential(catalog_magnetic_field(c, p, t), x);
    };
    pot.eA0 = [c, p](double, const Vec3& x) { return catalog_A0(c, p, x); };
    return pot;
}

fields::MaxwellReport catalog_maxwell_check(CatalogCase c, const CatalogParams& p, const GridSpec& grid,
                                            const fields::MaxwellOptions& options) {
    return fields::maxwell_residual(catalog_potential(c, p), grid, options);
}

FrameAcceleration case1_frame_rhs(const CatalogParams& p, double t, double l, double dl, double l3, double dl3,
                                  const Vec3& v, const Vec3& dv) {
    const double h = p.A * t + p.B;
    const double alpha = -0.5 * p.A * t * t - p.B * t;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    FrameAcceleration out;
    out.l = 2.0 * l * (2.0 * p.c / std::pow(l, 4) + p.k - 0.5 * h * h);
    out.l3 = 4.0 * l3 * (p.c3 / std::pow(l3, 4) - p.k);
    const double l_cubed = l * l * l;
    out.v.x() = (-2.0 * (p.a1 * ca + p.a2 * sa) - 2.0 * dl * dv.x() - 4.0 * p.c * v.x() / l_cubed + 2.0 * p.c11 / l) / l;
    out.v.y() = (-2.0 * (-p.a1 * sa + p.a2 * ca) - 2.0 * dl * dv.y() - 4.0 * p.c * v.y() / l_cubed + 2.0 * p.c12 / l) / l;
    out.v.z() = (-2.0 * p.a3 - 2.0 * dl3 * dv.z() - 4.0 * p.c3 * v.z() / (l3 * l3 * l3) + 2.0 * p.c13 / l3) / l3;
    return out;
}

FrameSolution case1_frame_solve(const CatalogParams& p, const FrameInitialState& init, double t1, double step) {
    if (!(step > 0.0) || !(t1 >= 0.0)) throw DomainError("case1_frame_solve: need t1 >= 0 and step > 0");
    if (init.l == 0.0 || init.l3 == 0.0) throw DomainError("case1_frame_solve: initial scales must be non-zero");
    using State = Eigen::Matrix<double, 10, 1>;
    const auto pack = [](double l, double dl, double l3, double dl3, const Vec3& v, const Vec3& dv) {
        State s;
        s << l, dl, l3, dl3, v, dv;
        return s;
    };
    const auto rhs = [&p](double t, const State& s) {
        const Vec3 v = s.segment<3>(4);
        const Vec3 dv = s.segment<3>(7);
        const FrameAcceleration acc = case1_frame_rhs(p, t, s[0], s[1], s[2], s[3], v, dv);
        State d;
        d << s[1], acc.l, s[3], acc.l3, dv, acc.v;
        return d;
    };
    const auto n = static_cast<long>(std::ceil(t1 / step - 1e-9));
    const double h = n > 0 ? t1 / static_cast<double>(n) : step;
    FrameSolution out;
    State s = pack(init.l, init.dl, init.l3, init.dl3, init.v, init.dv);
    const auto record = [&out](double t, const State& st) {
        out.t.push_back(t);
        out.l.push_back(st[0]);
        out.dl.push_back(st[1]);
        out.l3.push_back(st[2]);
        out.dl3.push_back(st[3]);
        out.v.emplace_back(st.segment<3>(4));
        out.dv.emplace_back(st.segment<3>(7));
    };
    record(0.0, s);
    const double l_sign = init.l > 0 ? 1.0 : -1.0;
    const double l3_sign = init.l3 > 0 ? 1.0 : -1.0;
    for (long i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        const State k1 = rhs(t, s);
        const State k2 = rhs(t + 0.5 * h, s + 0.5 * h * k1);
        const State k3 = rhs(t + 0.5 * h, s + 0.5 * h * k2);
        const State k4 = rhs(t + h, s + h * k3);
        s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!s.allFinite() || s[0] * l_sign <= 0.0 || s[2] * l3_sign <= 0.0) {
            throw IntegrationError("case1_frame_solve: a scale reached zero near t = " +
                                   std::to_string(static_cast<double>(i + 1) * h));
        }
        record(static_cast<double>(i + 1) * h, s);
    }
    return out;
}

double FrameSolution::resubstitution_residual(const CatalogParams& p) const {
    const std::size_t n = t.size();
    if (n < 5) return 0.0;
    const double h = t[1] - t[0];
    const auto d2 = [h](const auto& d, std::size_t i) {
        return (-d[i + 2] + 8.0 * d[i + 1] - 8.0 * d[i - 1] + d[i - 2]) / (12.0 * h);
    };
    std::array<double, 5> worst{}, scale{};
    scale.fill(1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto acc = case1_frame_rhs(p, t[i], l[i], dl[i], l3[i], dl3[i], v[i], dv[i]);
        scale[0] = std::max(scale[0], std::abs(acc.l));
        scale[1] = std::max(scale[1], std::abs(acc.l3));
        for (int j = 0; j < 3; ++j) scale[2 + j] = std::max(scale[2 + j], std::abs(acc.v[j]));
    }
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const auto acc = case1_frame_rhs(p, t[i], l[i], dl[i], l3[i], dl3[i], v[i], dv[i]);
        worst[0] = std::max(worst[0], std::abs(d2(dl, i) - acc.l));
        worst[1] = std::max(worst[1], std::abs(d2(dl3, i) - acc.l3));
        const Vec3 dv2 = d2(dv, i);
        for (int j = 0; j < 3; ++j) worst[2 + j] = std::max(worst[2 + j], std::abs(dv2[j] - acc.v[j]));
    }
    double out = 0.0;
    for (std::size_t j = 0; j < 5; ++j) out = std::max(out, worst[j] / scale[j]);
    return out;
}

double l_variant_c(LVariant v) {
    switch (v) {
        case LVariant::Plus: return -1.0;
        case LVariant::Minus: return 1.0;
        case LVariant::Sine: return 0.0;
    }
    return 0.0;
}

Jet case2_l_closed_form(double C1, double k, LVariant variant, double t) {
    if (k == 0.0) throw DomainError("case2_l_closed_form: k must be non-zero");
    Jet out;
    if (variant == LVariant::Sine) {
        const double mu = std::sqrt(2.0 / 3.0) * k;
        out.value = C1 * std::sin(mu * t);
        if (out.value == 0.0) throw DomainError("case2_l_closed_form: l vanishes at t");
        out.d1 = C1 * mu * std::cos(mu * t);
        out.d2 = -mu * mu * out.value;
        return out;
    }
    const double radicand = C1 * C1 + (variant == LVariant::Plus ? 1.0 : -1.0) / (k * k);
    if (radicand < 0.0) throw DomainError("case2_l_closed_form: C1^2 - 1/k^2 is negative");
    const double R = std::sqrt(radicand);
    const double w = 2.0 * std::sqrt(2.0 / 3.0) * k;
    const double u = R * std::sin(w * t) + C1;
    if (!(u > 0.0)) throw DomainError("case2_l_closed_form: l^2 <= 0 at t");
    const double du = R * w * std::cos(w * t);
    const double ddu = -R * w * w * std::sin(w * t);
    out.value = std::sqrt(u);
    out.d1 = du / (2.0 * out.value);
    out.d2 = (ddu - 2.0 * out.d1 * out.d1) / (2.0 * out.value);
    return out;
}

double proposition_A0(double q, double c, const Vec3& x) {
    const double r = x.norm();
    if (r == 0.0) throw DomainError("proposition_A0: x at the origin");
    return q / r - c * c / 12.0 * quadric(x);
}

separation::Scenario proposition_example(double q, double c, double k1, double k2, double k3, double beta,
                                         double gamma) {
    const coords::CoordSystem sys(coords::Family::Spherical);
    const auto one = TimeFunction::constant(1.0);
    const auto zero = TimeFunction::constant(0.0);
    frame::EulerFrame f(sys, TimeFunction::linear(0.0, -c), TimeFunction::constant(beta), TimeFunction::constant(gamma),
                        {one, one, one}, {zero, zero, zero}, frame::TimeWindow{0.0, 1.0});
    separation::Scenario s(std::move(f));
    s.name = "proposition";
    s.F.F00 = TimeFunction::constant(k1);
    s.F.Fa0[0] = ScalarFunction::sum({ScalarFunction::power(q, -3), ScalarFunction::power(c * c / 6.0, -6),
                                      ScalarFunction::power(k1, -4), ScalarFunction::power(-k2, -2)});
    s.F.Fa0[1] = ScalarFunction::sum({ScalarFunction::sech_squared(k2, 1.0), ScalarFunction::constant(-k3)});
    s.F.Fa0[2] = ScalarFunction::constant(k3);
    s.lambda = Vec3(0.7, -0.4, 0.25);
    s.grid.space = GridSpec::Space::Omega;
    s.grid.lo = {0.6, -0.6, 0.3};
    s.grid.hi = {1.2, 0.6, 2.5};
    s.grid.points = {4, 4, 4};
    s.grid.times = {0.0, 0.3};
    s.eA0_override = [q, c](double, const Vec3& x) { return proposition_A0(q, c, x); };
    return s;
}

std::vector<coords::CoordSystem> proposition_coordinate_menu(double a, int z3_shift, double k) {
    if (z3_shift != 1 && z3_shift != -1) throw DomainError("proposition_coordinate_menu: z3_shift must be +1 or -1");
    return {coords::CoordSystem(coords::Family::Spherical),
            coords::CoordSystem(coords::Family::ProlateSpheroidal, a, 0.5, z3_shift),
            coords::CoordSystem(coords::Family::Conical, 1.0, k)};
}

}  // namespace pauli_sep::catalog
