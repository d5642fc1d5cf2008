#include "pauli_sep/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include <Eigen/SVD>

#include "pauli_sep/parallel.hpp"

namespace pauli_sep::separation {

namespace {

const Complex kI(0.0, 1.0);

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps, 50);
}

Vec3 scale_values(const frame::EulerFrame& f, double t) {
    const auto l = f.scale_jets(t);
    return {l[0].value, l[1].value, l[2].value};
}

double norm(const Spinor2& s) { return s.norm(); }

struct PointEval {
    double residual = 0.0;
    double terms = 0.0;
    double psi = 0.0;
};

PointEval evaluate_point(const PauliProblem& p, const GridPoint& g, const ResidualOptions& o) {
    const double hx = o.h_x;
    const double ht = o.h_t;
    const Vec3& x = g.x;
    const double t = g.t;
    const Spinor2 psi = p.psi(t, x, g.omega);
    const Spinor2 pt = kI * (p.psi(t + ht, x, g.omega) - p.psi(t - ht, x, g.omega)) / (2.0 * ht);
    Spinor2 lap = Spinor2::Zero();
    Spinor2 a_dot_grad = Spinor2::Zero();
    const Vec3 eA = p.fields.eA(t, x);
    double div_A = 0.0;
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = hx;
        const Spinor2 plus = p.psi(t, x + e, g.omega);
        const Spinor2 minus = p.psi(t, x - e, g.omega);
        lap += (plus - 2.0 * psi + minus) / (hx * hx);
        a_dot_grad += eA[j] * (plus - minus) / (2.0 * hx);
        div_A += (p.fields.eA(t, x + e)[j] - p.fields.eA(t, x - e)[j]) / (2.0 * hx);
    }
    const Spinor2 kinetic = -lap + kI * div_A * psi + 2.0 * kI * a_dot_grad + eA.squaredNorm() * psi;
    const Spinor2 potential = p.fields.eA0(t, x, g.omega) * psi;
    const Spinor2 spin = spinor::sigma_dot(p.fields.eH(t)) * psi;
    const Spinor2 r = pt - potential - kinetic + spin;
    PointEval out;
    out.residual = norm(r);
    out.terms = std::max({norm(pt), norm(potential), norm(kinetic), norm(spin)});
    out.psi = norm(psi);
    return out;
}

ResidualReport reduce(const std::vector<GridPoint>& points, const std::vector<PointEval>& evals,
                      const ResidualOptions& o) {
    ResidualReport rep;
    rep.h_x = o.h_x;
    rep.h_t = o.h_t;
    double psi_max = 0.0;
    for (const auto& e : evals) psi_max = std::max(psi_max, e.psi);
    double terms_max = 0.0;
    double residual_max = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < evals.size(); ++i) {
        const auto& e = evals[i];
        if (e.psi < o.psi_floor * psi_max || e.terms == 0.0) {
            ++rep.skipped;
            continue;
        }
        const double rel = e.residual / e.terms;
        ++rep.points;
        sum += rel;
        terms_max = std::max(terms_max, e.terms);
        residual_max = std::max(residual_max, e.residual);
        if (rel > rep.max_rel || rep.points == 1) {
            rep.max_rel = std::max(rep.max_rel, rel);
            rep.worst = points[i];
        }
    }
    if (rep.points == 0) throw DomainError("pauli_residual: no grid point with non-negligible psi");
    rep.mean_rel = sum / static_cast<double>(rep.points);
    rep.max_rel_global = residual_max / terms_max;
    return rep;
}

Mat2C commutator(const Mat2C& a, const Mat2C& b) { return a * b - b * a; }

ReducedODECoefficients build_general(const ScalarTable& F, const std::function<ScalarFunction(int, int)>& G,
                                     const std::function<Vec3(int, int)>& s, std::string form) {
    ReducedODECoefficients c;
    c.form = std::move(form);
    for (int mu = 0; mu < 4; ++mu) {
        for (int al = 0; al < 4; ++al) {
            const ScalarFunction f = F[mu][al];
            const ScalarFunction g = G(mu, al);
            const Mat2C direction = spinor::sigma_dot(s(mu, al));
            c.P[mu][al] = [f, g, direction](double u) -> Mat2C {
                return Mat2C::Identity() * f(u) + g(u) * direction;
            };
        }
    }
    return c;
}

void validate_split(const ReducedODECoefficients& c, const std::vector<ArgumentSample>& samples) {
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& u = samples[k];
        for (int mu = 0; mu < 4; ++mu) {
            for (int nu = 0; nu < 4; ++nu) {
                if (mu == nu) continue;
                for (int al = 0; al < 4; ++al) {
                    for (int be = al; be < 4; ++be) {
                        const Mat2C pma = c.P[mu][al](u[mu]);
                        const Mat2C pnb = c.P[nu][be](u[nu]);
                        const Mat2C pmb = c.P[mu][be](u[mu]);
                        const Mat2C pna = c.P[nu][al](u[nu]);
                        const double value = (commutator(pma, pnb) + commutator(pmb, pna)).norm();
                        const double scale = 1.0 + pma.norm() * pnb.norm() + pmb.norm() * pna.norm();
                        if (value > 1e-12 * scale) {
                            std::ostringstream os;
                            os << "coefficient form violates the lambda-split commutator condition at (mu, nu, alpha, "
                                  "beta) = ("
                               << mu << ", " << nu << ", " << al << ", " << be << "), sample " << k
                               << ": norm " << value;
                            throw ConstructionError(os.str());
                        }
                    }
                }
            }
        }
    }
}

Mat3 polar(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

Mat3 rotation_rhs(const spinor::FieldFunction& eH, double t, const Mat3& o) { return -hat(eH(t)) * o; }

}  // namespace

bool Corruption::any() const {
    return stackel_entry.has_value() || stackel_column_copy.has_value() || lambda_shift != Vec3::Zero() ||
           q_phase != 0.0;
}

Vec3 effective_stackel_row(const Scenario& s, int a, double omega_a) {
    Vec3 row = coords::stackel_row(s.system(), a, omega_a);
    if (const auto& c = s.corruption.stackel_column_copy) row[c->to] = row[c->from];
    if (const auto& e = s.corruption.stackel_entry; e && e->row == a) row[e->col] += e->delta;
    return row;
}

Vec3 effective_T_row(const Scenario& s, double t) {
    Vec3 row = coords::T_functions(s.system(), scale_values(s.frame, t));
    if (const auto& c = s.corruption.stackel_column_copy) row[c->to] = row[c->from];
    return row;
}

double spatial_coefficient(const Scenario& s, int a, double omega_a) {
    return s.F.Fa0[static_cast<std::size_t>(a)](omega_a) + effective_stackel_row(s, a, omega_a).dot(s.lambda);
}

SpatialFactor::SpatialFactor(std::function<double(double)> coefficient, Interval range, const SpatialIC& ic,
                             int steps_per_unit)
    : coefficient_(std::move(coefficient)) {
    if (!(range.hi >= range.lo) || !std::isfinite(range.lo) || !std::isfinite(range.hi)) {
        throw DomainError("SpatialFactor: invalid range");
    }
    if (steps_per_unit < 1) throw DomainError("SpatialFactor: steps_per_unit must be positive");
    const double at = ic.at.value_or(0.5 * (range.lo + range.hi));
    const double lo = std::min(range.lo, at);
    const double hi = std::max(range.hi, at);
    step_ = 1.0 / steps_per_unit;
    const auto left = static_cast<long>(std::ceil((at - lo) / step_ - 1e-9));
    const auto right = static_cast<long>(std::ceil((hi - at) / step_ - 1e-9));
    lo_ = at - left * step_;
    hi_ = at + right * step_;
    const auto count = static_cast<std::size_t>(left + right + 1);
    values_.assign(count, Complex{});
    slopes_.assign(count, Complex{});
    const auto origin = static_cast<std::size_t>(left);
    values_[origin] = ic.value;
    slopes_[origin] = ic.slope;

    const auto V = [this](double w) {
        const double v = coefficient_(w);
        if (!std::isfinite(v)) {
            throw DomainError("spatial equation coefficient is singular at omega=" + std::to_string(w));
        }
        return v;
    };
    const auto step = [&](double w, Complex& y, Complex& dy, double h) {
        const double v0 = V(w);
        const double vm = V(w + 0.5 * h);
        const double v1 = V(w + h);
        const Complex k1y = dy, k1d = v0 * y;
        const Complex k2y = dy + 0.5 * h * k1d, k2d = vm * (y + 0.5 * h * k1y);
        const Complex k3y = dy + 0.5 * h * k2d, k3d = vm * (y + 0.5 * h * k2y);
        const Complex k4y = dy + h * k3d, k4d = v1 * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    };
    for (std::size_t k = origin + 1; k < count; ++k) {
        Complex y = values_[k - 1], dy = slopes_[k - 1];
        step(lo_ + static_cast<double>(k - 1) * step_, y, dy, step_);
        values_[k] = y;
        slopes_[k] = dy;
    }
    for (std::size_t k = origin; k-- > 0;) {
        Complex y = values_[k + 1], dy = slopes_[k + 1];
        step(lo_ + static_cast<double>(k + 1) * step_, y, dy, -step_);
        values_[k] = y;
        slopes_[k] = dy;
    }
}

std::size_t SpatialFactor::locate(double w, double& s) const {
    if (values_.empty()) throw DomainError("SpatialFactor: empty tabulation");
    if (w < lo_ - 1e-12 || w > hi_ + 1e-12 || !std::isfinite(w)) {
        std::ostringstream os;
        os << "SpatialFactor: omega=" << w << " outside the tabulated range [" << lo_ << ", " << hi_ << "]";
        throw DomainError(os.str());
    }
    if (values_.size() == 1) {
        s = 0.0;
        return 0;
    }
    const double pos = (w - lo_) / step_;
    const double k = std::clamp(std::floor(pos), 0.0, static_cast<double>(values_.size() - 2));
    s = pos - k;
    return static_cast<std::size_t>(k);
}

Complex SpatialFactor::operator()(double w) const {
    double s = 0.0;
    const std::size_t k = locate(w, s);
    if (values_.size() == 1) return values_[0];
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * values_[k] + ((s3 - 2 * s2 + s) * step_) * slopes_[k] +
           (-2 * s3 + 3 * s2) * values_[k + 1] + ((s3 - s2) * step_) * slopes_[k + 1];
}

Complex SpatialFactor::derivative(double w) const {
    double s = 0.0;
    const std::size_t k = locate(w, s);
    if (values_.size() == 1) return slopes_[0];
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) / step_) * values_[k] + (3 * s2 - 4 * s + 1) * slopes_[k] +
           ((-6 * s2 + 6 * s) / step_) * values_[k + 1] + (3 * s2 - 2 * s) * slopes_[k + 1];
}

double SpatialFactor::resubstitution_residual() const {
    if (values_.size() < 5) return 0.0;
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double w = lo_ + static_cast<double>(i) * step_;
        scale = std::max(scale, std::abs(values_[i]) + std::abs(coefficient_(w) * values_[i]));
    }
    for (std::size_t i = 2; i + 2 < values_.size(); ++i) {
        const double w = lo_ + static_cast<double>(i) * step_;
        const Complex d2 = (-slopes_[i + 2] + 8.0 * slopes_[i + 1] - 8.0 * slopes_[i - 1] + slopes_[i - 2]) / (12.0 * step_);
        worst = std::max(worst, std::abs(d2 - coefficient_(w) * values_[i]));
    }
    return scale > 0.0 ? worst / scale : worst;
}

Complex solve_time_factor(const Scenario& s, double t) {
    const double t0 = s.frame.window().t0;
    const Vec3 lambda = s.lambda + s.corruption.lambda_shift;
    const auto integrand = [&](double tau) {
        return s.F.F00(tau) + effective_T_row(s, tau).dot(lambda);
    };
    return std::exp(kI * adaptive_simpson(integrand, t0, t, 1e-12));
}

SpatialFactor solve_spatial_factor(const Scenario& s, int axis, Interval range, const SpatialIC& ic) {
    if (axis < 1 || axis > 3) throw DomainError("solve_spatial_factor: axis must be 1, 2 or 3");
    const int a = axis - 1;
    return SpatialFactor([s, a](double w) { return spatial_coefficient(s, a, w); }, range, ic);
}

std::vector<GridPoint> scenario_points(const Scenario& s) {
    std::vector<GridPoint> out;
    const auto nodes = s.grid.nodes();
    for (double t : s.grid.times) {
        for (const Vec3& n : nodes) {
            GridPoint g;
            g.t = t;
            if (s.grid.space == GridSpec::Space::Omega) {
                g.omega = coords::OmegaPoint(n);
                g.x = frame::x_of_omega(s.frame, t, g.omega);
                if (s.grid.excluded(g.x)) continue;
            } else {
                if (s.grid.excluded(n)) continue;
                g.x = n;
                g.omega = frame::omega_of_x(s.frame, t, n);
            }
            out.push_back(g);
        }
    }
    if (out.empty()) throw DomainError("scenario grid has no admissible point");
    return out;
}

SeparatedSolution::SeparatedSolution(const Scenario& s, spinor::PropagatorTable U, std::array<SpatialFactor, 3> phi)
    : scenario_(s), U_(std::move(U)), phi_(std::move(phi)) {}

Mat2C SeparatedSolution::Q(double t, const Vec3& x) const {
    Mat2C q = spinor::Q_multiplier(scenario_.frame, t, x, U_(t));
    if (scenario_.corruption.q_phase != 0.0) q *= std::exp(kI * scenario_.corruption.q_phase * x.squaredNorm());
    return q;
}

Spinor2 SeparatedSolution::assemble(double t, const Vec3& x, const coords::OmegaPoint& omega) const {
    Complex product = phi0(t);
    for (int a = 0; a < 3; ++a) product *= phi_[static_cast<std::size_t>(a)](omega[a]);
    return Q(t, x) * (product * scenario_.chi);
}

Spinor2 SeparatedSolution::psi(double t, const Vec3& x, const coords::OmegaPoint& hint) const {
    return assemble(t, x, frame::omega_of_x(scenario_.frame, t, x, hint));
}

Spinor2 SeparatedSolution::psi_at(double t, const coords::OmegaPoint& omega) const {
    return assemble(t, frame::x_of_omega(scenario_.frame, t, omega), omega);
}

SeparatedSolution solve(const Scenario& s, const SolveOptions& options) {
    const auto points = scenario_points(s);
    const double reach = options.stencil_reach;
    std::array<double, 3> lo{}, hi{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    double t_lo = s.frame.window().t0;
    double t_hi = s.frame.window().t0;
    const auto cover = [&](const coords::OmegaPoint& w) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], w[a]);
            hi[a] = std::max(hi[a], w[a]);
        }
    };
    for (const auto& g : points) {
        t_lo = std::min(t_lo, g.t - reach);
        t_hi = std::max(t_hi, g.t + reach);
        cover(g.omega);
        cover(frame::omega_of_x(s.frame, g.t + reach, g.x, g.omega));
        cover(frame::omega_of_x(s.frame, g.t - reach, g.x, g.omega));
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = reach;
            cover(frame::omega_of_x(s.frame, g.t, g.x + e, g.omega));
            cover(frame::omega_of_x(s.frame, g.t, g.x - e, g.omega));
        }
    }
    spinor::PropagatorOptions popt;
    popt.step = s.ode_step;
    const auto eH = [f = s.frame](double t) { return fields::magnetic_field(f, t); };
    spinor::PropagatorTable table(eH, t_lo - s.ode_step, t_hi + s.ode_step, popt);

    std::array<SpatialFactor, 3> phi;
    for (int a = 0; a < 3; ++a) {
        const double pad = 1e-3 + 0.01 * (hi[a] - lo[a]);
        const Interval range{lo[a] - pad, hi[a] + pad};
        phi[a] = SpatialFactor([s, a](double w) { return spatial_coefficient(s, a, w); }, range,
                               s.ic[static_cast<std::size_t>(a)], options.steps_per_unit);
        const double r = phi[a].resubstitution_residual();
        if (r > options.resubstitution_tolerance) {
            throw IntegrationError("spatial factor " + std::to_string(a + 1) + " fails re-substitution: residual " +
                                   std::to_string(r));
        }
    }
    return SeparatedSolution(s, std::move(table), std::move(phi));
}

Spinor2 assemble_solution(const SeparatedSolution& sol, double t, const Vec3& x) {
    return sol.psi(t, x, frame::omega_of_x(sol.scenario().frame, t, x));
}

PauliFields scenario_fields(const Scenario& s) {
    PauliFields p;
    const auto f = s.frame;
    p.eH = [f](double t) { return fields::magnetic_field(f, t); };
    p.eA = [f](double t, const Vec3& x) { return fields::vector_potential(fields::magnetic_field(f, t), x); };
    if (s.eA0_override) {
        p.eA0 = [o = s.eA0_override](double t, const Vec3& x, const coords::OmegaPoint&) { return o(t, x); };
    } else {
        p.eA0 = [f, F = s.F](double t, const Vec3& x, const coords::OmegaPoint& hint) {
            return fields::scalar_potential(f, F, t, x, hint);
        };
    }
    return p;
}

PauliProblem scenario_problem(const SeparatedSolution& sol) {
    PauliProblem p;
    p.psi = [&sol](double t, const Vec3& x, const coords::OmegaPoint& hint) { return sol.psi(t, x, hint); };
    p.fields = scenario_fields(sol.scenario());
    return p;
}

PauliProblem gauge_transform(const PauliProblem& p, const fields::GaugeFunction& g) {
    PauliProblem out;
    out.psi = [psi = p.psi, value = g.value](double t, const Vec3& x, const coords::OmegaPoint& hint) {
        return Spinor2(psi(t, x, hint) * std::exp(kI * value(t, x)));
    };
    out.fields.eH = p.fields.eH;
    out.fields.eA = [a = p.fields.eA, grad = g.grad](double t, const Vec3& x) { return Vec3(a(t, x) + grad(t, x)); };
    out.fields.eA0 = [a0 = p.fields.eA0, dt = g.dt](double t, const Vec3& x, const coords::OmegaPoint& hint) {
        return a0(t, x, hint) - dt(t, x);
    };
    return out;
}

ResidualReport pauli_residual(const PauliProblem& p, const std::vector<GridPoint>& points,
                              const ResidualOptions& options) {
    const auto evals = parallel_map<PointEval>(points.size(),
                                               [&](std::size_t i) { return evaluate_point(p, points[i], options); });
    return reduce(points, evals, options);
}

ResidualReport pauli_residual_serial(const PauliProblem& p, const std::vector<GridPoint>& points,
                                     const ResidualOptions& options) {
    const auto evals =
        serial_map<PointEval>(points.size(), [&](std::size_t i) { return evaluate_point(p, points[i], options); });
    return reduce(points, evals, options);
}

ResidualReport pauli_residual(const Scenario& s, const SeparatedSolution& sol, const ResidualOptions& options) {
    return pauli_residual(scenario_problem(sol), scenario_points(s), options);
}

Mat2C ReducedODECoefficients::combined(int mu, double u, const Vec3& lambda) const {
    Mat2C m = P[mu][0](u);
    for (int b = 0; b < 3; ++b) m += lambda[b] * P[mu][b + 1](u);
    return m;
}

CommutativityReport commutativity_check(const ReducedODECoefficients& c, const std::vector<ArgumentSample>& samples,
                                        const std::vector<Vec3>& lambdas) {
    CommutativityReport rep;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        for (const Vec3& lambda : lambdas) {
            std::array<Mat2C, 4> m;
            for (int mu = 0; mu < 4; ++mu) m[mu] = c.combined(mu, samples[k][mu], lambda);
            for (int mu = 0; mu < 4; ++mu) {
                for (int nu = mu + 1; nu < 4; ++nu) {
                    const double value = commutator(m[mu], m[nu]).norm();
                    const double scale = std::max(1.0, m[mu].norm() * m[nu].norm());
                    if (value > rep.worst) {
                        rep.worst = value;
                        rep.mu = mu;
                        rep.nu = nu;
                        rep.sample = k;
                        rep.lambda = lambda;
                    }
                    if (value > 1e-12 * scale) rep.ok = false;
                }
            }
        }
    }
    return rep;
}

ReducedODECoefficients matrix_coefficient_forms(const SharedDirectionForm& spec,
                                                const std::vector<ArgumentSample>& samples) {
    auto c = build_general(
        spec.F, [&](int mu, int al) { return spec.G[mu][al]; }, [&](int, int) { return spec.s; },
        "shared-direction");
    validate_split(c, samples);
    return c;
}

ReducedODECoefficients matrix_coefficient_forms(const SharedProfileForm& spec,
                                                const std::vector<ArgumentSample>& samples) {
    auto c = build_general(
        spec.F, [&](int mu, int) { return spec.G[mu]; }, [&](int, int al) { return spec.s[al]; }, "shared-profile");
    validate_split(c, samples);
    return c;
}

ReducedODECoefficients general_coefficient_form(const GeneralForm& spec) {
    return build_general(
        spec.F, [&](int mu, int al) { return spec.G[mu][al]; }, [&](int, int al) { return spec.s[al]; }, "general");
}

ReducedODECoefficients matrix_coefficient_forms(const GeneralForm& spec, const std::vector<ArgumentSample>& samples) {
    auto c = general_coefficient_form(spec);
    validate_split(c, samples);
    return c;
}

ReducedODECoefficients stackel_coefficient_forms(const Scenario& s) {
    ReducedODECoefficients c;
    c.form = "scalar";
    const Mat2C id = Mat2C::Identity();
    c.P[0][0] = [F00 = s.F.F00, id](double t) -> Mat2C { return id * F00(t); };
    for (int b = 0; b < 3; ++b) {
        c.P[0][b + 1] = [s, b, id](double t) -> Mat2C { return id * effective_T_row(s, t)[b]; };
    }
    for (int a = 0; a < 3; ++a) {
        c.P[a + 1][0] = [Fa = s.F.Fa0[static_cast<std::size_t>(a)], id](double w) -> Mat2C { return id * Fa(w); };
        for (int b = 0; b < 3; ++b) {
            c.P[a + 1][b + 1] = [s, a, b, id](double w) -> Mat2C { return id * effective_stackel_row(s, a, w)[b]; };
        }
    }
    return c;
}

int numerical_rank(const Eigen::Matrix<double, 4, 3>& input, double pivot_threshold) {
    Eigen::Matrix<double, 4, 3> m = input;
    for (int r = 0; r < 4; ++r) {
        const double s = m.row(r).cwiseAbs().maxCoeff();
        if (s > 0.0 && std::isfinite(s)) m.row(r) /= s;
    }
    if (!m.allFinite()) return 0;
    int rank = 0;
    for (int k = 0; k < 3; ++k) {
        Eigen::Index pr = 0, pc = 0;
        const double pivot = m.block(k, k, 4 - k, 3 - k).cwiseAbs().maxCoeff(&pr, &pc);
        if (pivot < pivot_threshold) break;
        m.row(k).swap(m.row(k + pr));
        m.col(k).swap(m.col(k + pc));
        for (int r = k + 1; r < 4; ++r) m.row(r) -= m(r, k) / m(k, k) * m.row(k);
        ++rank;
    }
    return rank;
}

namespace {

RankReport rank_over(const std::vector<RankSample>& samples,
                     const std::function<Eigen::Matrix<double, 4, 3>(const RankSample&)>& build) {
    RankReport rep;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const int r = numerical_rank(build(samples[k]));
        if (r < rep.min_rank) {
            rep.min_rank = r;
            rep.failing_sample = k;
        }
    }
    rep.ok = rep.min_rank == 3;
    return rep;
}

}  // namespace

RankReport rank_check(const frame::EulerFrame& f, const std::vector<RankSample>& samples) {
    return rank_over(samples, [&](const RankSample& s) {
        Eigen::Matrix<double, 4, 3> m;
        m.row(0) = coords::T_functions(f.system(), scale_values(f, s.t)).transpose();
        m.bottomRows<3>() = coords::stackel_matrix(f.system(), s.omega);
        return m;
    });
}

RankReport rank_check(const Scenario& sc, const std::vector<RankSample>& samples) {
    return rank_over(samples, [&](const RankSample& s) {
        coords::check_domain(sc.system(), s.omega);
        Eigen::Matrix<double, 4, 3> m;
        m.row(0) = effective_T_row(sc, s.t).transpose();
        for (int a = 0; a < 3; ++a) m.row(a + 1) = effective_stackel_row(sc, a, s.omega[a]).transpose();
        return m;
    });
}

Mat3 RotationTable::at(double t, const spinor::FieldFunction& eH) const {
    if (times.empty()) throw DomainError("RotationTable: empty table");
    if (times.size() == 1) return rotations.front();
    const double step = times[1] - times[0];
    if (t < times.front() - 1e-12 || t > times.back() + 1e-12) {
        throw DomainError("RotationTable: t outside the tabulated range");
    }
    const double pos = (t - times.front()) / step;
    const auto k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(times.size() - 2)));
    const double s = pos - static_cast<double>(k);
    const double s2 = s * s, s3 = s2 * s;
    const Mat3 m0 = rotation_rhs(eH, times[k], rotations[k]);
    const Mat3 m1 = rotation_rhs(eH, times[k + 1], rotations[k + 1]);
    return (2 * s3 - 3 * s2 + 1) * rotations[k] + ((s3 - 2 * s2 + s) * step) * m0 +
           (-2 * s3 + 3 * s2) * rotations[k + 1] + ((s3 - s2) * step) * m1;
}

RotationTable fixed_potential_frame(const spinor::FieldFunction& eH, double t1, double step) {
    if (!(step > 0.0) || !(t1 >= 0.0) || !std::isfinite(t1)) {
        throw DomainError("fixed_potential_frame: need t1 >= 0 and a positive step");
    }
    RotationTable table;
    const auto n = static_cast<long>(std::ceil(t1 / step - 1e-9));
    const double h = n > 0 ? t1 / static_cast<double>(n) : step;
    table.times.reserve(static_cast<std::size_t>(n + 1));
    table.rotations.reserve(static_cast<std::size_t>(n + 1));
    Mat3 o = Mat3::Identity();
    table.times.push_back(0.0);
    table.rotations.push_back(o);
    for (long i = 0; i < n; ++i) {
        const double t = i * h;
        const Mat3 k1 = rotation_rhs(eH, t, o);
        const Mat3 k2 = rotation_rhs(eH, t + 0.5 * h, o + 0.5 * h * k1);
        const Mat3 k3 = rotation_rhs(eH, t + 0.5 * h, o + 0.5 * h * k2);
        const Mat3 k4 = rotation_rhs(eH, t + h, o + h * k3);
        o += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double defect = (o.transpose() * o - Mat3::Identity()).norm();
        table.max_orthogonality_defect = std::max(table.max_orthogonality_defect, defect);
        if (defect > 1e-9) {
            throw IntegrationError("fixed_potential_frame: orthogonality drift " + std::to_string(defect) +
                                   " in one step; reduce the step");
        }
        o = polar(o);
        table.times.push_back((i + 1) * h);
        table.rotations.push_back(o);
    }
    return table;
}

std::vector<frame::EulerAngles> unwrapped_euler_angles(const RotationTable& table) {
    std::vector<frame::EulerAngles> out;
    out.reserve(table.rotations.size());
    const double two_pi = 2.0 * std::numbers::pi;
    for (const Mat3& o : table.rotations) {
        frame::EulerAngles e = frame::euler_angles(o);
        if (!out.empty()) {
            e.alpha += two_pi * std::round((out.back().alpha - e.alpha) / two_pi);
            e.beta += two_pi * std::round((out.back().beta - e.beta) / two_pi);
        }
        out.push_back(e);
    }
    return out;
}

GaugeReduction gauge_reduce(const std::function<Vec3(double, const Vec3&)>& eA, double t,
                            const std::vector<Vec3>& x_samples, double nonlinearity_tolerance) {
    const auto n = static_cast<Eigen::Index>(x_samples.size());
    Eigen::MatrixXd design(n, 4);
    Eigen::MatrixXd rhs(n, 3);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3& x = x_samples[static_cast<std::size_t>(i)];
        design.row(i) << x.x(), x.y(), x.z(), 1.0;
        const Vec3 a = eA(t, x);
        rhs.row(i) = a.transpose();
        scale = std::max(scale, a.cwiseAbs().maxCoeff());
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (n < 4 || qr.rank() < 4) {
        throw DomainError("gauge_reduce: need at least four non-coplanar sample points");
    }
    const Eigen::MatrixXd coeffs = qr.solve(rhs);  // 4 x 3
    GaugeReduction out;
    out.M = coeffs.topRows<3>().transpose();
    out.b = coeffs.row(3).transpose();
    out.nonlinearity = (design * coeffs - rhs).cwiseAbs().maxCoeff() / scale;
    if (out.nonlinearity > nonlinearity_tolerance) {
        std::ostringstream os;
        os << "vector potential is not linear in x (fit residual " << out.nonlinearity
           << "); not separable in this framework";
        throw NotSeparableError(os.str());
    }
    out.eH = 2.0 * vee(out.M);
    const Mat3 sym = 0.5 * (out.M + out.M.transpose());
    for (const Vec3& x : x_samples) out.defect = std::max(out.defect, (sym * x + out.b).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace pauli_sep::separation
