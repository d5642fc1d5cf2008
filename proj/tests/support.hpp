#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "pauli_sep/coords.hpp"

namespace pauli_sep::testing {

/// Systems used across the suites; a = 1.3 and k = 0.6 keep every focal set visible.
inline coords::CoordSystem test_system(int index) {
    return coords::CoordSystem(static_cast<coords::Family>(index), 1.3, 0.6);
}

/// Sampling box well inside the domain of a family.
inline std::array<std::array<double, 2>, 3> interior_box(const coords::CoordSystem& s) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double K = s.quarter_period();
    const double Kp = s.quarter_period_prime();
    switch (s.index()) {
        case 1: return {{{-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}}};
        case 2: return {{{-1.0, 1.0}, {0.1, two_pi - 0.1}, {-1.0, 1.0}}};
        case 3: return {{{0.2, 2.0}, {-2.0, 2.0}, {-1.0, 1.0}}};
        case 4: return {{{0.2, 2.0}, {-3.0, 3.0}, {-1.0, 1.0}}};
        case 5:
        case 6: return {{{0.3, 2.0}, {-1.5, 1.5}, {0.1, two_pi - 0.1}}};
        case 7: return {{{0.15, 1.4}, {-1.5, 1.5}, {0.1, two_pi - 0.1}}};
        case 8: return {{{-1.0, 1.0}, {-1.0, 1.0}, {0.1, two_pi - 0.1}}};
        case 9: return {{{0.2, 1.2}, {0.2, 1.37}, {0.2, 1.2}}};
        case 10: return {{{0.15, K - 0.15}, {-Kp + 0.15, Kp - 0.15}, {0.1, 4.0 * K - 0.1}}};
        default: return {{{0.3, 2.0}, {-Kp + 0.15, Kp - 0.15}, {0.1, 4.0 * K - 0.1}}};
    }
}

/// Uniform sample from interior_box that also clears the family's focal sets by 0.05.
inline coords::OmegaPoint sample_interior(const coords::CoordSystem& s, std::mt19937_64& rng) {
    const auto box = interior_box(s);
    for (;;) {
        coords::OmegaPoint w;
        for (int i = 0; i < 3; ++i) {
            std::uniform_real_distribution<double> u(box[i][0], box[i][1]);
            w[i] = u(rng);
        }
        try {
            coords::check_domain(s, w, 0.05);
            return w;
        } catch (const Error&) {
        }
    }
}

/// Difference of two angles reduced to (-pi, pi].
inline double angle_gap(double a, double b) { return std::remainder(a - b, 2.0 * std::numbers::pi); }

}  // namespace pauli_sep::testing
