#include "pauli_sep/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "pauli_sep/fields.hpp"

namespace pauli_sep::spinor {

namespace {

const Complex kI(0.0, 1.0);

Mat2C rk4_step(const FieldFunction& eH, double t, const Mat2C& u, double h) {
    const auto f = [&](double s, const Mat2C& m) -> Mat2C { return kI * sigma_dot(eH(s)) * m; };
    const Mat2C k1 = f(t, u);
    const Mat2C k2 = f(t + 0.5 * h, u + 0.5 * h * k1);
    const Mat2C k3 = f(t + 0.5 * h, u + 0.5 * h * k2);
    const Mat2C k4 = f(t + h, u + h * k3);
    return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates from 0 to t; returns U(t) and the largest unitarity defect seen.
std::pair<Mat2C, double> integrate(const FieldFunction& eH, double t, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("solve_U: step must be positive");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("solve_U: t must be finite and non-negative");
    Mat2C u = Mat2C::Identity();
    double worst = 0.0;
    const auto n = static_cast<long>(std::ceil(t / step - 1e-9));
    double s = 0.0;
    for (long i = 0; i < n; ++i) {
        const double h = std::min(step, t - s);
        u = rk4_step(eH, s, u, h);
        s = (i + 1 == n) ? t : s + h;
        worst = std::max(worst, unitarity_defect(u));
    }
    return {u, worst};
}

}  // namespace

Mat2C pauli_sigma(int i) {
    Mat2C m;
    switch (i) {
        case 1: m << 0, 1, 1, 0; return m;
        case 2: m << 0, -kI, kI, 0; return m;
        case 3: m << 1, 0, 0, -1; return m;
        default: throw DomainError("pauli_sigma: index must be 1, 2 or 3, got " + std::to_string(i));
    }
}

Mat2C sigma_dot(const Vec3& v) {
    Mat2C m;
    m << v.z(), Complex(v.x(), -v.y()), Complex(v.x(), v.y()), -v.z();
    return m;
}

double unitarity_defect(const Mat2C& m) { return (m.adjoint() * m - Mat2C::Identity()).norm(); }

Mat2C solve_U(const FieldFunction& eH, double t, double step) {
    PropagatorOptions o;
    o.step = step;
    auto [u, worst] = integrate(eH, t, step);
    if (worst > o.drift_tolerance) {
        throw IntegrationError("solve_U: unitarity drift " + std::to_string(worst) + " exceeds " +
                               std::to_string(o.drift_tolerance) + "; reduce the step");
    }
    return u;
}

PropagatorResult solve_U_report(const FieldFunction& eH, double t, const PropagatorOptions& options) {
    auto [u, worst] = integrate(eH, t, options.step);
    if (worst > options.drift_tolerance) {
        throw IntegrationError("solve_U: unitarity drift " + std::to_string(worst) + " exceeds " +
                               std::to_string(options.drift_tolerance) + "; reduce the step");
    }
    const auto [fine, fine_worst] = integrate(eH, t, 0.5 * options.step);
    (void)fine_worst;
    return {u, worst, (fine - u).norm() / 15.0};
}

PropagatorTable::PropagatorTable(FieldFunction eH, double t_lo, double t_hi, const PropagatorOptions& options)
    : eH_(std::move(eH)), step_(options.step) {
    if (!(step_ > 0.0)) throw DomainError("PropagatorTable: step must be positive");
    if (!(t_hi >= t_lo) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) {
        throw DomainError("PropagatorTable: invalid time range");
    }
    first_index_ = std::min(0L, static_cast<long>(std::floor(t_lo / step_)));
    const long last_index = std::max(0L, static_cast<long>(std::ceil(t_hi / step_)));
    t_lo_ = first_index_ * step_;
    t_hi_ = last_index * step_;
    const auto count = static_cast<std::size_t>(last_index - first_index_ + 1);
    nodes_.assign(count, Mat2C::Identity());
    const auto zero = static_cast<std::size_t>(-first_index_);
    for (std::size_t k = zero + 1; k < count; ++k) {
        const double t = (static_cast<long>(k) - 1 + first_index_) * step_;
        nodes_[k] = rk4_step(eH_, t, nodes_[k - 1], step_);
    }
    for (std::size_t k = zero; k-- > 0;) {
        const double t = (static_cast<long>(k) + 1 + first_index_) * step_;
        nodes_[k] = rk4_step(eH_, t, nodes_[k + 1], -step_);
    }
    slopes_.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = (static_cast<long>(k) + first_index_) * step_;
        slopes_[k] = rhs(t, nodes_[k]);
        max_defect_ = std::max(max_defect_, unitarity_defect(nodes_[k]));
    }
    if (max_defect_ > options.drift_tolerance) {
        throw IntegrationError("PropagatorTable: unitarity drift " + std::to_string(max_defect_) + " exceeds " +
                               std::to_string(options.drift_tolerance));
    }
}

Mat2C PropagatorTable::rhs(double t, const Mat2C& u) const { return kI * sigma_dot(eH_(t)) * u; }

Mat2C PropagatorTable::operator()(double t) const {
    if (t < t_lo_ - 1e-12 || t > t_hi_ + 1e-12) {
        throw DomainError("PropagatorTable: t=" + std::to_string(t) + " outside the tabulated range");
    }
    if (nodes_.size() == 1) return nodes_[0];
    const double pos = (t - t_lo_) / step_;
    const auto k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(nodes_.size() - 2)));
    const double s = pos - static_cast<double>(k);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * nodes_[k] + (h10 * step_) * slopes_[k] + h01 * nodes_[k + 1] + (h11 * step_) * slopes_[k + 1];
}

Mat2C Q_multiplier(const frame::EulerFrame& f, double t, const Vec3& x, const Mat2C& U) {
    const auto l = f.scale_jets(t);
    const double product = l[0].value * l[1].value * l[2].value;
    if (!(product > 0.0)) throw DomainError("Q_multiplier: scale product must be positive");
    const double s = fields::S_phase(f, t, frame::x_prime(f, t, x));
    return U * (std::exp(kI * s) / std::sqrt(product));
}

double S1_damping(const frame::EulerFrame& f, double t) {
    const auto l = f.scale_jets(t);
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
        if (!(l[a].value > 0.0)) throw DomainError("S1_damping: scales must be positive");
        s += std::log(l[a].value);
    }
    return -0.5 * s;
}

}  // namespace pauli_sep::spinor
