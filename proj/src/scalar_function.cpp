#include "pauli_sep/scalar_function.hpp"

#include <cmath>
#include <set>

#include "pauli_sep/types.hpp"

namespace pauli_sep {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Jet eval_node(const ScalarFunction::Node& node, double u);

Jet eval(const ScalarFunction::Constant& f, double) { return {f.c, 0.0, 0.0}; }

Jet eval(const ScalarFunction::Linear& f, double u) { return {f.c0 + f.c1 * u, f.c1, 0.0}; }

Jet eval(const ScalarFunction::Polynomial& f, double u) {
    Jet out;
    // Horner on value and both derivatives at once
    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
        out.d2 = out.d2 * u + 2.0 * out.d1;
        out.d1 = out.d1 * u + out.value;
        out.value = out.value * u + *it;
    }
    return out;
}

Jet eval(const ScalarFunction::Sinusoid& f, double u) {
    const double arg = f.frequency * u + f.phase;
    const double s = std::sin(arg);
    const double c = std::cos(arg);
    return {f.amplitude * s + f.offset, f.amplitude * f.frequency * c,
            -f.amplitude * f.frequency * f.frequency * s};
}

Jet eval(const ScalarFunction::Exponential& f, double u) {
    const double e = f.amplitude * std::exp(f.rate * u);
    return {e, f.rate * e, f.rate * f.rate * e};
}

Jet eval(const ScalarFunction::Power& f, double u) {
    if (f.power < 0 && u == 0.0) {
        throw DomainError("power law with negative exponent evaluated at 0");
    }
    const double n = f.power;
    const double d1 = f.power == 0 ? 0.0 : f.coeff * n * std::pow(u, f.power - 1);
    const double d2 = (f.power == 0 || f.power == 1) ? 0.0 : f.coeff * n * (n - 1.0) * std::pow(u, f.power - 2);
    return {f.coeff * std::pow(u, f.power), d1, d2};
}

Jet eval(const ScalarFunction::SechSquared& f, double u) {
    const double x = f.rate * u;
    const double sech = 1.0 / std::cosh(x);
    const double s2 = sech * sech;
    const double th = std::tanh(x);
    const double r = f.rate;
    return {f.amplitude * s2, -2.0 * f.amplitude * r * s2 * th,
            2.0 * f.amplitude * r * r * s2 * (2.0 * th * th - s2)};
}

Jet eval(const ScalarFunction::Sum& f, double u) {
    Jet out;
    for (const auto& term : f.terms) {
        const Jet j = term.jet(u);
        out.value += j.value;
        out.d1 += j.d1;
        out.d2 += j.d2;
    }
    return out;
}

Jet eval(const ScalarFunction::Product& f, double u) {
    Jet out{1.0, 0.0, 0.0};
    for (const auto& factor : f.factors) {
        const Jet g = factor.jet(u);
        out = {out.value * g.value, out.d1 * g.value + out.value * g.d1,
               out.d2 * g.value + 2.0 * out.d1 * g.d1 + out.value * g.d2};
    }
    return out;
}

Jet eval_node(const ScalarFunction::Node& node, double u) {
    return std::visit([u](const auto& f) { return eval(f, u); }, node);
}

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw SchemaError(std::string("function record missing field '") + key + "'");
    }
    if (!j.at(key).is_number()) {
        throw SchemaError(std::string("function field '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

double optional_number(const nlohmann::json& j, const char* key, double fallback) {
    return j.contains(key) ? require_number(j, key) : fallback;
}

void reject_unknown(const nlohmann::json& j, std::set<std::string> allowed) {
    allowed.insert("form");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw SchemaError("unknown key '" + key + "' in function record of form '" +
                              j.at("form").get<std::string>() + "'");
        }
    }
}

}  // namespace

ScalarFunction::ScalarFunction() : node_(std::make_shared<const Node>(Constant{0.0})) {}

ScalarFunction::ScalarFunction(Node node) : node_(std::make_shared<const Node>(std::move(node))) {
    if (const auto* p = std::get_if<Polynomial>(node_.get()); p && p->coeffs.size() > 5) {
        throw ConstructionError("polynomial time functions are limited to degree 4");
    }
}

ScalarFunction ScalarFunction::constant(double c) { return ScalarFunction(Constant{c}); }
ScalarFunction ScalarFunction::linear(double c0, double c1) { return ScalarFunction(Linear{c0, c1}); }
ScalarFunction ScalarFunction::polynomial(std::vector<double> coeffs) {
    return ScalarFunction(Polynomial{std::move(coeffs)});
}
ScalarFunction ScalarFunction::sinusoid(double amplitude, double frequency, double phase, double offset) {
    return ScalarFunction(Sinusoid{amplitude, frequency, phase, offset});
}
ScalarFunction ScalarFunction::exponential(double amplitude, double rate) {
    return ScalarFunction(Exponential{amplitude, rate});
}
ScalarFunction ScalarFunction::power(double coeff, int power) { return ScalarFunction(Power{coeff, power}); }
ScalarFunction ScalarFunction::sech_squared(double amplitude, double rate) {
    return ScalarFunction(SechSquared{amplitude, rate});
}
ScalarFunction ScalarFunction::sum(std::vector<ScalarFunction> terms) {
    return ScalarFunction(Sum{std::move(terms)});
}
ScalarFunction ScalarFunction::product(ScalarFunction a, ScalarFunction b) {
    return ScalarFunction(Product{{std::move(a), std::move(b)}});
}

Jet ScalarFunction::jet(double u) const { return eval_node(*node_, u); }

bool ScalarFunction::is_zero_constant() const {
    if (const auto* c = std::get_if<Constant>(node_.get())) {
        return c->c == 0.0;
    }
    return false;
}

nlohmann::json ScalarFunction::to_json() const {
    using nlohmann::json;
    return std::visit(
        Overloaded{
            [](const Constant& f) { return json{{"form", "constant"}, {"c", f.c}}; },
            [](const Linear& f) { return json{{"form", "linear"}, {"c0", f.c0}, {"c1", f.c1}}; },
            [](const Polynomial& f) { return json{{"form", "polynomial"}, {"coeffs", f.coeffs}}; },
            [](const Sinusoid& f) {
                return json{{"form", "sinusoid"},   {"amplitude", f.amplitude}, {"frequency", f.frequency},
                            {"phase", f.phase}, {"offset", f.offset}};
            },
            [](const Exponential& f) {
                return json{{"form", "exponential"}, {"amplitude", f.amplitude}, {"rate", f.rate}};
            },
            [](const Power& f) { return json{{"form", "power"}, {"coeff", f.coeff}, {"power", f.power}}; },
            [](const SechSquared& f) {
                return json{{"form", "sech2"}, {"amplitude", f.amplitude}, {"rate", f.rate}};
            },
            [](const Sum& f) {
                json terms = json::array();
                for (const auto& t : f.terms) terms.push_back(t.to_json());
                return json{{"form", "sum"}, {"terms", terms}};
            },
            [](const Product& f) {
                json factors = json::array();
                for (const auto& t : f.factors) factors.push_back(t.to_json());
                return json{{"form", "product"}, {"factors", factors}};
            },
        },
        *node_);
}

ScalarFunction ScalarFunction::from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        return constant(j.get<double>());
    }
    if (!j.is_object() || !j.contains("form") || !j.at("form").is_string()) {
        throw SchemaError("function record must be a number or an object with a string 'form'");
    }
    const auto form = j.at("form").get<std::string>();
    if (form == "constant") {
        reject_unknown(j, {"c"});
        return constant(require_number(j, "c"));
    }
    if (form == "linear") {
        reject_unknown(j, {"c0", "c1"});
        return linear(require_number(j, "c0"), require_number(j, "c1"));
    }
    if (form == "polynomial") {
        reject_unknown(j, {"coeffs"});
        if (!j.contains("coeffs") || !j.at("coeffs").is_array()) {
            throw SchemaError("polynomial record needs an array 'coeffs'");
        }
        std::vector<double> coeffs;
        for (const auto& c : j.at("coeffs")) {
            if (!c.is_number()) throw SchemaError("polynomial coefficients must be numbers");
            coeffs.push_back(c.get<double>());
        }
        if (coeffs.empty() || coeffs.size() > 5) {
            throw SchemaError("polynomial needs 1 to 5 coefficients (degree <= 4)");
        }
        return polynomial(std::move(coeffs));
    }
    if (form == "sinusoid") {
        reject_unknown(j, {"amplitude", "frequency", "phase", "offset"});
        return sinusoid(require_number(j, "amplitude"), require_number(j, "frequency"),
                        optional_number(j, "phase", 0.0), optional_number(j, "offset", 0.0));
    }
    if (form == "exponential") {
        reject_unknown(j, {"amplitude", "rate"});
        return exponential(require_number(j, "amplitude"), require_number(j, "rate"));
    }
    if (form == "power") {
        reject_unknown(j, {"coeff", "power"});
        if (!j.contains("power") || !j.at("power").is_number_integer()) {
            throw SchemaError("power record needs an integer 'power'");
        }
        return power(require_number(j, "coeff"), j.at("power").get<int>());
    }
    if (form == "sech2") {
        reject_unknown(j, {"amplitude", "rate"});
        return sech_squared(require_number(j, "amplitude"), optional_number(j, "rate", 1.0));
    }
    if (form == "sum" || form == "product") {
        const char* key = form == "sum" ? "terms" : "factors";
        reject_unknown(j, {key});
        if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
            throw SchemaError(form + " record needs a non-empty array '" + key + "'");
        }
        std::vector<ScalarFunction> parts;
        for (const auto& p : j.at(key)) parts.push_back(from_json(p));
        if (form == "sum") return sum(std::move(parts));
        if (parts.size() != 2) throw SchemaError("product record takes exactly two factors");
        return product(std::move(parts[0]), std::move(parts[1]));
    }
    throw SchemaError("unknown function form '" + form + "'");
}

}  // namespace pauli_sep
