#include "pauli_sep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace pauli_sep {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

Vec3 vec3_from(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(where + ": expected an array of three numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number()) throw SchemaError(where + ": expected numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

std::array<double, 3> triple_from(const nlohmann::json& j, const std::string& where) {
    const Vec3 v = vec3_from(j, where);
    return {v[0], v[1], v[2]};
}

}  // namespace

double Exclusion::distance(const Vec3& x) const {
    const Vec3 d = x - center;
    switch (kind) {
        case Kind::Sphere:
            return d.norm();
        case Kind::AxisCylinder:
            return std::hypot(d.x(), d.y());
        case Kind::Disk:
            return std::hypot(std::max(0.0, std::hypot(d.x(), d.y()) - disk_radius), d.z());
    }
    return d.norm();
}

nlohmann::json Exclusion::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case Kind::Sphere: j["kind"] = "sphere"; break;
        case Kind::AxisCylinder: j["kind"] = "axis"; break;
        case Kind::Disk: j["kind"] = "disk"; break;
    }
    j["center"] = {center.x(), center.y(), center.z()};
    j["radius"] = radius;
    if (kind == Kind::Disk) j["disk_radius"] = disk_radius;
    return j;
}

Exclusion Exclusion::from_json(const nlohmann::json& j) {
    reject_unknown(j, {"kind", "center", "radius", "disk_radius"}, "exclusion");
    Exclusion e;
    const std::string kind = j.value("kind", "sphere");
    if (kind == "sphere") {
        e.kind = Kind::Sphere;
    } else if (kind == "axis") {
        e.kind = Kind::AxisCylinder;
    } else if (kind == "disk") {
        e.kind = Kind::Disk;
    } else {
        throw SchemaError("exclusion: unknown kind '" + kind + "'");
    }
    if (j.contains("center")) e.center = vec3_from(j["center"], "exclusion.center");
    if (j.contains("radius")) {
        if (!j["radius"].is_number()) throw SchemaError("exclusion.radius must be a number");
        e.radius = j["radius"].get<double>();
    }
    if (j.contains("disk_radius")) {
        if (!j["disk_radius"].is_number()) throw SchemaError("exclusion.disk_radius must be a number");
        e.disk_radius = j["disk_radius"].get<double>();
    }
    if (e.radius < 0.0 || e.disk_radius < 0.0) throw SchemaError("exclusion radii must be non-negative");
    return e;
}

double GridSpec::node(int axis, int i) const {
    const auto a = static_cast<std::size_t>(axis);
    if (points[a] <= 1) return 0.5 * (lo[a] + hi[a]);
    return lo[a] + (hi[a] - lo[a]) * i / (points[a] - 1);
}

std::vector<Vec3> GridSpec::nodes() const {
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(points[0]) * points[1] * points[2]);
    for (int i = 0; i < points[0]; ++i) {
        for (int j = 0; j < points[1]; ++j) {
            for (int k = 0; k < points[2]; ++k) {
                out.emplace_back(node(0, i), node(1, j), node(2, k));
            }
        }
    }
    return out;
}

bool GridSpec::excluded(const Vec3& x) const {
    return std::any_of(exclusions.begin(), exclusions.end(), [&](const Exclusion& e) { return e.excludes(x); });
}

std::vector<Vec3> GridSpec::admissible_nodes() const {
    std::vector<Vec3> out;
    for (const Vec3& x : nodes()) {
        if (!excluded(x)) out.push_back(x);
    }
    return out;
}

nlohmann::json GridSpec::to_json() const {
    nlohmann::json j;
    j["space"] = space == Space::Cartesian ? "x" : "omega";
    j["lo"] = lo;
    j["hi"] = hi;
    j["points"] = points;
    j["times"] = times;
    if (!exclusions.empty()) {
        j["exclusions"] = nlohmann::json::array();
        for (const auto& e : exclusions) j["exclusions"].push_back(e.to_json());
    }
    return j;
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
    reject_unknown(j, {"space", "lo", "hi", "points", "times", "exclusions"}, "grid");
    GridSpec g;
    const std::string space = j.value("space", "x");
    if (space == "x") {
        g.space = Space::Cartesian;
    } else if (space == "omega") {
        g.space = Space::Omega;
    } else {
        throw SchemaError("grid.space must be \"x\" or \"omega\"");
    }
    if (j.contains("lo")) g.lo = triple_from(j["lo"], "grid.lo");
    if (j.contains("hi")) g.hi = triple_from(j["hi"], "grid.hi");
    if (j.contains("points")) {
        const auto& p = j["points"];
        if (!p.is_array() || p.size() != 3) throw SchemaError("grid.points: expected three integers");
        for (int i = 0; i < 3; ++i) {
            if (!p[i].is_number_integer() || p[i].get<int>() < 1) {
                throw SchemaError("grid.points: entries must be positive integers");
            }
            g.points[static_cast<std::size_t>(i)] = p[i].get<int>();
        }
    }
    if (j.contains("times")) {
        const auto& t = j["times"];
        if (!t.is_array() || t.empty()) throw SchemaError("grid.times: expected a non-empty array of numbers");
        g.times.clear();
        for (const auto& v : t) {
            if (!v.is_number()) throw SchemaError("grid.times: expected numbers");
            g.times.push_back(v.get<double>());
        }
    }
    if (j.contains("exclusions")) {
        if (!j["exclusions"].is_array()) throw SchemaError("grid.exclusions: expected an array");
        for (const auto& e : j["exclusions"]) g.exclusions.push_back(Exclusion::from_json(e));
    }
    for (int i = 0; i < 3; ++i) {
        if (!(g.hi[static_cast<std::size_t>(i)] >= g.lo[static_cast<std::size_t>(i)])) {
            throw SchemaError("grid: hi must not be below lo");
        }
    }
    return g;
}

}  // namespace pauli_sep
