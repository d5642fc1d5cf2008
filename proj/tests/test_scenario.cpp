#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "pauli_sep/catalog.hpp"
#include "pauli_sep/scenario.hpp"

using namespace pauli_sep;
using nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) {
    return std::string(PAULI_SEP_SOURCE_DIR) + "/scenarios/" + name + ".json";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    return json::parse(in);
}

}  // namespace

TEST_CASE("shipped scenario files round-trip") {
    for (const char* name : {"free_particle", "rotating_cylindrical", "proposition", "corrupted_stackel"}) {
        CAPTURE(name);
        const auto file = load_scenario(scenario_path(name));
        const json once = file.to_json();
        const json twice = ScenarioFile::from_json(once).to_json();
        CHECK(once == twice);
        CHECK(once.dump() == twice.dump());
    }
}

TEST_CASE("round trip preserves the solution") {
    const auto file = load_scenario(scenario_path("rotating_cylindrical"));
    const auto copy = ScenarioFile::from_json(file.to_json());
    const auto a = separation::solve(file.scenario, file.solve);
    const auto b = separation::solve(copy.scenario, copy.solve);
    const auto ra = separation::pauli_residual(file.scenario, a, file.residual);
    const auto rb = separation::pauli_residual(copy.scenario, b, copy.residual);
    CHECK(ra.max_rel == rb.max_rel);
    CHECK(ra.points == rb.points);
}

TEST_CASE("shipped file contents") {
    const auto fp = load_scenario(scenario_path("free_particle"));
    CHECK(fp.scenario.system().family() == coords::Family::Cartesian);
    CHECK((fp.scenario.lambda - Vec3(-1.0, -0.25, -0.5625)).norm() == 0.0);
    CHECK(fp.tolerance == 1e-4);
    CHECK(fp.residual.h_x == 1e-3);

    const auto cs = load_scenario(scenario_path("corrupted_stackel"));
    REQUIRE(cs.scenario.corruption.stackel_column_copy.has_value());
    CHECK(cs.scenario.corruption.stackel_column_copy->from == 0);
    CHECK(cs.scenario.corruption.stackel_column_copy->to == 1);

    const auto pr = load_scenario(scenario_path("proposition"));
    REQUIRE(pr.potential.has_value());
    const auto A0 = closed_form_potential(*pr.potential);
    const Vec3 x(0.3, -0.7, 1.1);
    CHECK(A0(0.0, x) == catalog::proposition_A0(1.0, 1.0, x));
}

TEST_CASE("built-in proposition file") {
    const auto pf = proposition_file();
    REQUIRE(pf.potential.has_value());
    CHECK((*pf.potential)["kind"] == "proposition");
    const auto back = ScenarioFile::from_json(pf.to_json());
    CHECK(back.to_json() == pf.to_json());
    CHECK(back.scenario.eA0_override != nullptr);
}

TEST_CASE("catalog potential records") {
    const json rec = {{"kind", "catalog"}, {"case", "s4"}, {"params", {{"k", 0.7}, {"a", 1.2}, {"a1", 0.5}}}};
    const auto A0 = closed_form_potential(rec);
    catalog::CatalogParams p;
    p.k = 0.7;
    p.a = 1.2;
    p.a1 = 0.5;
    const Vec3 x(0.6, 0.2, 0.3);
    CHECK(A0(0.0, x) == catalog::catalog_A0(catalog::CatalogCase::S4, p, x));
    const json s7 = {{"kind", "catalog"}, {"case", "s7"}, {"params", {{"s7_form", "amended"}}}};
    CHECK_NOTHROW(closed_form_potential(s7)(0.0, Vec3(-1.0, 0.5, 0.0)));
}

TEST_CASE("schema errors") {
    json base = read_json(scenario_path("free_particle"));
    CHECK_NOTHROW(ScenarioFile::from_json(base));

    auto top = base;
    top["colour"] = "blue";
    CHECK_THROWS_AS(ScenarioFile::from_json(top), SchemaError);
    auto nested = base;
    nested["numerics"]["h_y"] = 0.1;
    CHECK_THROWS_AS(ScenarioFile::from_json(nested), SchemaError);
    auto grid = base;
    grid["grid"]["spacing"] = 2;
    CHECK_THROWS_AS(ScenarioFile::from_json(grid), SchemaError);
    auto family = base;
    family["system"]["family"] = "toroidal";
    CHECK_THROWS_AS(ScenarioFile::from_json(family), SchemaError);
    auto lambda = base;
    lambda["lambda"] = {1.0, 2.0};
    CHECK_THROWS_AS(ScenarioFile::from_json(lambda), SchemaError);
    auto ics = base;
    ics["initial_conditions"].erase(2);
    CHECK_THROWS_AS(ScenarioFile::from_json(ics), SchemaError);
    auto negative = base;
    negative["numerics"]["h_x"] = -1e-3;
    CHECK_THROWS_AS(ScenarioFile::from_json(negative), SchemaError);
    auto corruption = base;
    corruption["corruption"] = {{"stackel_entry", {{"row", 3}, {"col", 0}}}};
    CHECK_THROWS_AS(ScenarioFile::from_json(corruption), SchemaError);
    auto fn = base;
    fn["coefficients"]["F00"] = {{"form", "bessel"}};
    CHECK_THROWS_AS(ScenarioFile::from_json(fn), SchemaError);

    CHECK_THROWS_AS(closed_form_potential(json{{"kind", "dipole"}}), SchemaError);
    CHECK_THROWS_AS(closed_form_potential(json{{"kind", "catalog"}, {"case", "s9"}}), SchemaError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), SchemaError);

    {
        std::ofstream out("broken_scenario.json");
        out << "{\"name\": ";
    }
    CHECK_THROWS_AS(load_scenario("broken_scenario.json"), SchemaError);
}
