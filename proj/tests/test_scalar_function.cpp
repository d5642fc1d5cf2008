#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pauli_sep/scalar_function.hpp"
#include "pauli_sep/types.hpp"

using namespace pauli_sep;

namespace {

std::vector<ScalarFunction> samples() {
    return {ScalarFunction::constant(2.5),
            ScalarFunction::linear(0.3, -1.2),
            ScalarFunction::polynomial({1.0, -0.5, 0.25, 0.1, -0.02}),
            ScalarFunction::sinusoid(0.4, 1.7, 0.3, 1.0),
            ScalarFunction::exponential(0.6, -0.8),
            ScalarFunction::power(1.5, -3),
            ScalarFunction::sech_squared(0.7, 1.3),
            ScalarFunction::sum({ScalarFunction::power(1.0, -2), ScalarFunction::sinusoid(1.0, 2.0, 0.0, 0.0)}),
            ScalarFunction::product(ScalarFunction::exponential(1.0, 0.5), ScalarFunction::linear(1.0, 2.0))};
}

}  // namespace

TEST_CASE("jets agree with finite differences") {
    const double h = 1e-3;
    for (const auto& f : samples()) {
        for (double u : {0.4, 1.1, 2.7}) {
            const Jet j = f.jet(u);
            const double d1 = (f(u - 2 * h) - 8 * f(u - h) + 8 * f(u + h) - f(u + 2 * h)) / (12 * h);
            const double d2 = (-f(u - 2 * h) + 16 * f(u - h) - 30 * f(u) + 16 * f(u + h) - f(u + 2 * h)) / (12 * h * h);
            CHECK(j.d1 == doctest::Approx(d1).epsilon(1e-7).scale(1.0));
            CHECK(j.d2 == doctest::Approx(d2).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("closed-form values") {
    CHECK(ScalarFunction::sech_squared(2.0, 1.0)(0.5) == doctest::Approx(2.0 / std::pow(std::cosh(0.5), 2)));
    CHECK(ScalarFunction::power(3.0, -2)(2.0) == doctest::Approx(0.75));
    CHECK(ScalarFunction::polynomial({1, 2, 3})(2.0) == doctest::Approx(17.0));
    CHECK(ScalarFunction::constant(0.0).is_zero_constant());
    CHECK_FALSE(ScalarFunction::constant(1.0).is_zero_constant());
    CHECK_THROWS_AS(ScalarFunction::power(1.0, -1)(0.0), DomainError);
}

TEST_CASE("json round trip") {
    for (const auto& f : samples()) {
        const auto j = f.to_json();
        const auto g = ScalarFunction::from_json(j);
        CHECK(g.to_json() == j);
        CHECK(g(0.9) == doctest::Approx(f(0.9)).epsilon(1e-15));
    }
    CHECK(ScalarFunction::from_json(nlohmann::json(1.5))(3.0) == 1.5);
}

TEST_CASE("schema errors") {
    using nlohmann::json;
    CHECK_THROWS_AS(ScalarFunction::from_json(json{{"form", "cubic"}}), SchemaError);
    CHECK_THROWS_AS(ScalarFunction::from_json(json{{"form", "linear"}, {"c0", 1}}), SchemaError);
    CHECK_THROWS_AS(ScalarFunction::from_json(json{{"form", "constant"}, {"c", 1}, {"extra", 2}}), SchemaError);
    CHECK_THROWS_AS(ScalarFunction::from_json(json{{"form", "power"}, {"coeff", 1}, {"power", 0.5}}), SchemaError);
    CHECK_THROWS_AS(ScalarFunction::from_json(json{{"form", "polynomial"}, {"coeffs", {1, 2, 3, 4, 5, 6}}}),
                    SchemaError);
    CHECK_THROWS_AS(ScalarFunction::from_json(json("x")), SchemaError);
}
