#pragma once

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "pauli_sep/types.hpp"

namespace pauli_sep {

/// Neighbourhood of a singular locus removed from a sampling grid.
struct Exclusion {
    enum class Kind {
        Sphere,       ///< points within `radius` of `center`
        AxisCylinder, ///< points within `radius` of the line through `center` parallel to x3
        Disk,         ///< points within `radius` of the disk of radius `disk_radius` in the plane x3 = center.x3
    };
    Kind kind = Kind::Sphere;
    Vec3 center = Vec3::Zero();
    double radius = 0.5;
    double disk_radius = 0.0;

    double distance(const Vec3& x) const;
    bool excludes(const Vec3& x) const { return distance(x) < radius; }

    nlohmann::json to_json() const;
    static Exclusion from_json(const nlohmann::json& j);
};

/// Tensor-product sampling grid over a box, either in Cartesian x or in curvilinear omega.
///
/// Nodes include both box ends; an axis with one point samples the box centre.
struct GridSpec {
    enum class Space { Cartesian, Omega };
    Space space = Space::Cartesian;
    std::array<double, 3> lo{-1.0, -1.0, -1.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<int, 3> points{5, 5, 5};
    std::vector<double> times{0.0};
    std::vector<Exclusion> exclusions;

    double node(int axis, int i) const;
    /// All box nodes in lexicographic order (axis 0 slowest), before exclusions.
    std::vector<Vec3> nodes() const;
    /// Nodes that survive every exclusion; only meaningful for Cartesian grids.
    std::vector<Vec3> admissible_nodes() const;
    bool excluded(const Vec3& x) const;

    nlohmann::json to_json() const;
    /// Throws SchemaError on unknown keys or malformed values.
    static GridSpec from_json(const nlohmann::json& j);
};

}  // namespace pauli_sep
