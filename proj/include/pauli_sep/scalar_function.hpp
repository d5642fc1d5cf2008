#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace pauli_sep {

/// Value with exact first and second derivatives.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Closed-form scalar function of one real variable with exact derivatives.
///
/// Used both for time functions (Euler angles, scales, translations, F00) and
/// for the single-variable potential coefficients F_a0(omega_a).
///
/// JSON form: tagged records, e.g. {"form":"linear","c0":0,"c1":-1}.
class ScalarFunction {
public:
    struct Constant { double c = 0.0; };
    struct Linear { double c0 = 0.0; double c1 = 0.0; };
    /// sum_i coeffs[i] * u^i, degree <= 4.
    struct Polynomial { std::vector<double> coeffs; };
    /// amplitude * sin(frequency * u + phase) + offset
    struct Sinusoid { double amplitude = 0.0; double frequency = 1.0; double phase = 0.0; double offset = 0.0; };
    /// amplitude * exp(rate * u)
    struct Exponential { double amplitude = 0.0; double rate = 0.0; };
    /// coeff * u^power, integer power (negative allowed; u = 0 is a domain error when power < 0)
    struct Power { double coeff = 0.0; int power = 0; };
    /// amplitude * sech^2(rate * u)
    struct SechSquared { double amplitude = 0.0; double rate = 1.0; };
    struct Sum { std::vector<ScalarFunction> terms; };
    struct Product { std::vector<ScalarFunction> factors; };

    using Node = std::variant<Constant, Linear, Polynomial, Sinusoid, Exponential, Power, SechSquared, Sum,
                              Product>;

    ScalarFunction();
    explicit ScalarFunction(Node node);

    static ScalarFunction constant(double c);
    static ScalarFunction linear(double c0, double c1);
    static ScalarFunction polynomial(std::vector<double> coeffs);
    static ScalarFunction sinusoid(double amplitude, double frequency, double phase, double offset);
    static ScalarFunction exponential(double amplitude, double rate);
    static ScalarFunction power(double coeff, int power);
    static ScalarFunction sech_squared(double amplitude, double rate);
    static ScalarFunction sum(std::vector<ScalarFunction> terms);
    static ScalarFunction product(ScalarFunction a, ScalarFunction b);

    Jet jet(double u) const;
    double operator()(double u) const { return jet(u).value; }

    /// True when the function is the constant zero by construction.
    bool is_zero_constant() const;

    const Node& node() const { return *node_; }

    nlohmann::json to_json() const;
    /// Throws SchemaError on unknown forms, unknown keys or missing fields.
    static ScalarFunction from_json(const nlohmann::json& j);

private:
    std::shared_ptr<const Node> node_;
};

using TimeFunction = ScalarFunction;

}  // namespace pauli_sep
