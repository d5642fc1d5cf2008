#include "pauli_sep/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace pauli_sep::frame {

namespace {

constexpr int kSplitSamples = 64;
constexpr int kZeroSamples = 1000;

void require_equal(const TimeFunction& a, const TimeFunction& b, TimeWindow w, const std::string& what) {
    for (int i = 0; i <= kSplitSamples; ++i) {
        const double t = w.t0 + (w.t1 - w.t0) * i / kSplitSamples;
        const Jet ja = a.jet(t);
        const Jet jb = b.jet(t);
        const double scale = 1.0 + std::abs(ja.value) + std::abs(ja.d1) + std::abs(ja.d2);
        if (std::abs(ja.value - jb.value) + std::abs(ja.d1 - jb.d1) + std::abs(ja.d2 - jb.d2) > 1e-12 * scale) {
            throw ConstructionError(what + " at t=" + std::to_string(t));
        }
    }
}

Mat3 diag(const std::array<Jet, 3>& j, double Jet::*field) {
    return Vec3(j[0].*field, j[1].*field, j[2].*field).asDiagonal();
}

}  // namespace

EulerFrame::EulerFrame(coords::CoordSystem sys, TimeFunction alpha, TimeFunction beta, TimeFunction gamma,
                       std::array<TimeFunction, 3> scales, std::array<TimeFunction, 3> shifts, TimeWindow window)
    : sys_(std::move(sys)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      gamma_(std::move(gamma)),
      scales_(std::move(scales)),
      shifts_(std::move(shifts)),
      window_(window) {
    if (!(window_.t1 >= window_.t0) || !std::isfinite(window_.t0) || !std::isfinite(window_.t1)) {
        throw ConstructionError("frame time window must satisfy t0 <= t1");
    }
    for (int a = 0; a < 3; ++a) {
        double previous = 0.0;
        for (int i = 0; i <= kZeroSamples; ++i) {
            const double t = window_.t0 + (window_.t1 - window_.t0) * i / kZeroSamples;
            const double value = scales_[a](t);
            if (!std::isfinite(value) || value == 0.0 || (i > 0 && value * previous < 0.0)) {
                throw ConstructionError("scale l" + std::to_string(a + 1) + " vanishes on the time window near t=" +
                                        std::to_string(t));
            }
            previous = value;
        }
    }
    switch (sys_.split_class()) {
        case coords::SplitClass::FullySplit:
            break;
        case coords::SplitClass::PartiallySplit:
            require_equal(scales_[0], scales_[1], window_,
                          sys_.name() + " is partially split and requires l1 = l2; violated");
            break;
        case coords::SplitClass::NonSplit:
            require_equal(scales_[0], scales_[1], window_, sys_.name() + " is non-split and requires l1 = l2 = l3; l1 != l2");
            require_equal(scales_[0], scales_[2], window_, sys_.name() + " is non-split and requires l1 = l2 = l3; l1 != l3");
            break;
    }
}

EulerFrame EulerFrame::identity(coords::CoordSystem sys, TimeWindow window) {
    const auto zero = TimeFunction::constant(0.0);
    const auto one = TimeFunction::constant(1.0);
    return EulerFrame(std::move(sys), zero, zero, zero, {one, one, one}, {zero, zero, zero}, window);
}

std::array<Jet, 3> EulerFrame::scale_jets(double t) const {
    return {scales_[0].jet(t), scales_[1].jet(t), scales_[2].jet(t)};
}

std::array<Jet, 3> EulerFrame::shift_jets(double t) const {
    return {shifts_[0].jet(t), shifts_[1].jet(t), shifts_[2].jet(t)};
}

Mat3 rotation_matrix(double alpha, double beta, double gamma) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    Mat3 o;
    o << ca * cb - sa * sb * cg, -ca * sb - sa * cb * cg, sa * sg,
         sa * cb + ca * sb * cg, -sa * sb + ca * cb * cg, -ca * sg,
         sb * sg, cb * sg, cg;
    return o;
}

Mat3 rotation_matrix(const EulerFrame& f, double t) {
    return rotation_matrix(f.alpha()(t), f.beta()(t), f.gamma()(t));
}

Vec3 angular_velocity(const EulerFrame& f, double t) {
    const Jet a = f.alpha().jet(t);
    const Jet b = f.beta().jet(t);
    const Jet g = f.gamma().jet(t);
    const double ca = std::cos(a.value), sa = std::sin(a.value);
    const double sg = std::sin(g.value), cg = std::cos(g.value);
    return {g.d1 * ca + b.d1 * sa * sg, g.d1 * sa - b.d1 * ca * sg, a.d1 + b.d1 * cg};
}

Mat3 rotation_rate_matrix(const EulerFrame& f, double t) {
    const Jet a = f.alpha().jet(t);
    const Jet b = f.beta().jet(t);
    const Jet g = f.gamma().jet(t);
    const double ca = std::cos(a.value), sa = std::sin(a.value);
    const double sg = std::sin(g.value), cg = std::cos(g.value);
    const double w3 = a.d1 + b.d1 * cg;
    const double w2 = g.d1 * sa - b.d1 * ca * sg;
    const double w1 = g.d1 * ca + b.d1 * sa * sg;
    Mat3 m;
    m << 0.0, -w3, w2,
         w3, 0.0, -w1,
         -w2, w1, 0.0;
    return m;
}

MDecomposition M_matrix(const EulerFrame& f, double t) {
    const auto l = f.scale_jets(t);
    for (int a = 0; a < 3; ++a) {
        if (l[a].value == 0.0) throw DomainError("M_matrix: scale l" + std::to_string(a + 1) + " is zero");
    }
    const Mat3 o = rotation_matrix(f, t);
    const Mat3 rate = Vec3(l[0].d1 / l[0].value, l[1].d1 / l[1].value, l[2].d1 / l[2].value).asDiagonal();
    return {rotation_rate_matrix(f, t), o * rate * o.transpose()};
}

Vec3 x_of_omega(const EulerFrame& f, double t, const coords::OmegaPoint& omega) {
    const auto l = f.scale_jets(t);
    const auto v = f.shift_jets(t);
    const Vec3 local = coords::z_of_omega(f.system(), omega) + Vec3(v[0].value, v[1].value, v[2].value);
    return rotation_matrix(f, t) * (diag(l, &Jet::value) * local);
}

Vec3 x_prime(const EulerFrame& f, double t, const Vec3& x) { return rotation_matrix(f, t).transpose() * x; }

Vec3 z_of_x(const EulerFrame& f, double t, const Vec3& x) {
    const auto l = f.scale_jets(t);
    const auto v = f.shift_jets(t);
    const Vec3 xp = x_prime(f, t, x);
    return Vec3(xp[0] / l[0].value - v[0].value, xp[1] / l[1].value - v[1].value, xp[2] / l[2].value - v[2].value);
}

coords::OmegaPoint omega_of_x(const EulerFrame& f, double t, const Vec3& x, const coords::OmegaPoint& hint) {
    return coords::omega_of_z(f.system(), z_of_x(f, t, x), hint);
}

coords::OmegaPoint omega_of_x(const EulerFrame& f, double t, const Vec3& x) {
    return coords::omega_of_z(f.system(), z_of_x(f, t, x));
}

EulerAngles euler_angles(const Mat3& o) {
    const double gamma = std::acos(std::clamp(o(2, 2), -1.0, 1.0));
    if (std::abs(std::sin(gamma)) < 1e-12) {
        return {std::atan2(o(1, 0), o(0, 0)), 0.0, gamma};
    }
    return {std::atan2(o(0, 2), -o(1, 2)), std::atan2(o(2, 0), o(2, 1)), gamma};
}

}  // namespace pauli_sep::frame
