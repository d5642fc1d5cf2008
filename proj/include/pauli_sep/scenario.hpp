#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "pauli_sep/separation.hpp"

namespace pauli_sep {

/// A scenario document: the separable configuration plus numerics and outputs.
///
/// Top-level keys: name, system, frame, coefficients, lambda, chi, grid,
/// initial_conditions, potential, corruption, numerics, outputs. Unknown keys
/// anywhere raise SchemaError.
struct ScenarioFile {
    explicit ScenarioFile(separation::Scenario s) : scenario(std::move(s)) {}

    separation::Scenario scenario;
    separation::SolveOptions solve;
    separation::ResidualOptions residual;
    /// Verification passes when max_rel is below this.
    double tolerance = 1e-4;
    /// Closed-form scalar potential record, e.g. {"kind":"proposition","q":1,"c":1}.
    std::optional<nlohmann::json> potential;
    std::optional<std::string> dump_psi;
    std::optional<std::string> summary;

    nlohmann::json to_json() const;
    static ScenarioFile from_json(const nlohmann::json& j);
};

/// Reads and validates a scenario file. Throws SchemaError on malformed input.
ScenarioFile load_scenario(const std::string& path);

/// Closed-form eA0 for a potential record; throws SchemaError for unknown kinds.
std::function<double(double, const Vec3&)> closed_form_potential(const nlohmann::json& record);

/// ScenarioFile for the built-in proposition scenario with its potential record set.
ScenarioFile proposition_file(double q = 1.0, double c = 1.0, double k1 = 0.3, double k2 = 0.2, double k3 = 0.1);

}  // namespace pauli_sep
