#include "pauli_sep/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pauli_sep/catalog.hpp"

namespace pauli_sep {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where + ": expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return j.get<int>();
}

Vec3 vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(where + ": expected an array of three numbers");
    return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

Complex complex_from(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw SchemaError(where + ": expected a number or [re, im]");
    return {number(j[0], where), number(j[1], where)};
}

json complex_to(Complex z) { return json::array({z.real(), z.imag()}); }

ScalarFunction function_from(const json& j, const std::string& where) {
    try {
        return ScalarFunction::from_json(j);
    } catch (const SchemaError& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

std::array<TimeFunction, 3> function_triple(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(where + ": expected three function records");
    return {function_from(j[0], where + "[0]"), function_from(j[1], where + "[1]"), function_from(j[2], where + "[2]")};
}

coords::CoordSystem system_from(const json& j) {
    reject_unknown(j, {"family", "a", "k", "z3_shift"}, "system");
    const json& fam = require(j, "family", "system");
    if (!fam.is_string()) throw SchemaError("system.family must be a string");
    const double a = j.contains("a") ? number(j["a"], "system.a") : 1.0;
    const double k = j.contains("k") ? number(j["k"], "system.k") : 0.5;
    const int shift = j.contains("z3_shift") ? integer(j["z3_shift"], "system.z3_shift") : 0;
    try {
        return coords::CoordSystem::from_name(fam.get<std::string>(), a, k, shift);
    } catch (const DomainError& e) {
        throw SchemaError(std::string("system: ") + e.what());
    }
}

json system_to(const coords::CoordSystem& s) {
    json j{{"family", s.name()}};
    if (s.uses_a() || s.z3_shift() != 0) j["a"] = s.a();
    if (s.uses_k()) j["k"] = s.k();
    if (s.z3_shift() != 0) j["z3_shift"] = s.z3_shift();
    return j;
}

frame::EulerFrame frame_from(const coords::CoordSystem& sys, const json& j) {
    reject_unknown(j, {"alpha", "beta", "gamma", "scales", "shifts", "window"}, "frame");
    const auto fn = [&](const char* key) {
        return j.contains(key) ? function_from(j[key], std::string("frame.") + key) : TimeFunction::constant(0.0);
    };
    const auto one = TimeFunction::constant(1.0);
    const auto zero = TimeFunction::constant(0.0);
    std::array<TimeFunction, 3> scales{one, one, one};
    std::array<TimeFunction, 3> shifts{zero, zero, zero};
    if (j.contains("scales")) scales = function_triple(j["scales"], "frame.scales");
    if (j.contains("shifts")) shifts = function_triple(j["shifts"], "frame.shifts");
    frame::TimeWindow window;
    if (j.contains("window")) {
        const json& w = j["window"];
        if (!w.is_array() || w.size() != 2) throw SchemaError("frame.window: expected [t0, t1]");
        window = {number(w[0], "frame.window"), number(w[1], "frame.window")};
        if (!(window.t1 >= window.t0)) throw SchemaError("frame.window: t1 < t0");
    }
    try {
        return frame::EulerFrame(sys, fn("alpha"), fn("beta"), fn("gamma"), scales, shifts, window);
    } catch (const ConstructionError& e) {
        throw SchemaError(std::string("frame: ") + e.what());
    }
}

json frame_to(const frame::EulerFrame& f) {
    json scales = json::array(), shifts = json::array();
    for (int a = 0; a < 3; ++a) {
        scales.push_back(f.scales()[a].to_json());
        shifts.push_back(f.shifts()[a].to_json());
    }
    return {{"alpha", f.alpha().to_json()}, {"beta", f.beta().to_json()}, {"gamma", f.gamma().to_json()},
            {"scales", scales},           {"shifts", shifts},          {"window", {f.window().t0, f.window().t1}}};
}

separation::Corruption corruption_from(const json& j) {
    reject_unknown(j, {"stackel_entry", "stackel_column_copy", "lambda_shift", "q_phase"}, "corruption");
    separation::Corruption c;
    const auto index = [](const json& v, const std::string& where) {
        const int i = integer(v, where);
        if (i < 0 || i > 2) throw SchemaError(where + ": index must be 0, 1 or 2");
        return i;
    };
    if (j.contains("stackel_entry")) {
        const json& e = j["stackel_entry"];
        reject_unknown(e, {"row", "col", "delta"}, "corruption.stackel_entry");
        separation::Corruption::StackelEntry s;
        s.row = index(require(e, "row", "corruption.stackel_entry"), "corruption.stackel_entry.row");
        s.col = index(require(e, "col", "corruption.stackel_entry"), "corruption.stackel_entry.col");
        if (e.contains("delta")) s.delta = number(e["delta"], "corruption.stackel_entry.delta");
        c.stackel_entry = s;
    }
    if (j.contains("stackel_column_copy")) {
        const json& e = j["stackel_column_copy"];
        reject_unknown(e, {"from", "to"}, "corruption.stackel_column_copy");
        separation::Corruption::StackelColumnCopy s;
        s.from = index(require(e, "from", "corruption.stackel_column_copy"), "corruption.stackel_column_copy.from");
        s.to = index(require(e, "to", "corruption.stackel_column_copy"), "corruption.stackel_column_copy.to");
        c.stackel_column_copy = s;
    }
    if (j.contains("lambda_shift")) c.lambda_shift = vec3(j["lambda_shift"], "corruption.lambda_shift");
    if (j.contains("q_phase")) c.q_phase = number(j["q_phase"], "corruption.q_phase");
    return c;
}

json corruption_to(const separation::Corruption& c) {
    json j = json::object();
    if (c.stackel_entry) {
        j["stackel_entry"] = {{"row", c.stackel_entry->row}, {"col", c.stackel_entry->col},
                              {"delta", c.stackel_entry->delta}};
    }
    if (c.stackel_column_copy) {
        j["stackel_column_copy"] = {{"from", c.stackel_column_copy->from}, {"to", c.stackel_column_copy->to}};
    }
    if (c.lambda_shift != Vec3::Zero()) j["lambda_shift"] = {c.lambda_shift.x(), c.lambda_shift.y(), c.lambda_shift.z()};
    if (c.q_phase != 0.0) j["q_phase"] = c.q_phase;
    return j;
}

catalog::CatalogParams params_from(const json& j) {
    reject_unknown(j, {"A", "B", "k", "q", "a", "a1", "a2", "a3", "c", "C1", "c3", "c11", "c12", "c13", "s7_form"},
                   "potential.params");
    catalog::CatalogParams p;
    const auto set = [&](const char* key, double& field) {
        if (j.contains(key)) field = number(j[key], std::string("potential.params.") + key);
    };
    set("A", p.A);
    set("B", p.B);
    set("k", p.k);
    set("q", p.q);
    set("a", p.a);
    set("a1", p.a1);
    set("a2", p.a2);
    set("a3", p.a3);
    set("c", p.c);
    set("C1", p.C1);
    set("c3", p.c3);
    set("c11", p.c11);
    set("c12", p.c12);
    set("c13", p.c13);
    if (j.contains("s7_form")) {
        const auto form = j["s7_form"];
        if (form == "verbatim") {
            p.s7 = catalog::S7Form::Verbatim;
        } else if (form == "amended") {
            p.s7 = catalog::S7Form::Amended;
        } else {
            throw SchemaError("potential.params.s7_form must be \"verbatim\" or \"amended\"");
        }
    }
    return p;
}

}  // namespace

std::function<double(double, const Vec3&)> closed_form_potential(const json& record) {
    if (!record.is_object() || !record.contains("kind") || !record["kind"].is_string()) {
        throw SchemaError("potential: expected an object with a string 'kind'");
    }
    const auto kind = record["kind"].get<std::string>();
    if (kind == "proposition") {
        reject_unknown(record, {"kind", "q", "c"}, "potential");
        const double q = number(require(record, "q", "potential"), "potential.q");
        const double c = number(require(record, "c", "potential"), "potential.c");
        return [q, c](double, const Vec3& x) { return catalog::proposition_A0(q, c, x); };
    }
    if (kind == "catalog") {
        reject_unknown(record, {"kind", "case", "params"}, "potential");
        const json& name = require(record, "case", "potential");
        if (!name.is_string()) throw SchemaError("potential.case must be a string");
        catalog::CatalogCase c;
        try {
            c = catalog::case_from_name(name.get<std::string>());
        } catch (const DomainError& e) {
            throw SchemaError(std::string("potential: ") + e.what());
        }
        const catalog::CatalogParams p = record.contains("params") ? params_from(record["params"]) : catalog::CatalogParams{};
        return [c, p](double, const Vec3& x) { return catalog::catalog_A0(c, p, x); };
    }
    throw SchemaError("potential: unknown kind '" + kind + "'");
}

ScenarioFile ScenarioFile::from_json(const json& j) {
    reject_unknown(j,
                   {"name", "system", "frame", "coefficients", "lambda", "chi", "grid", "initial_conditions",
                    "potential", "corruption", "numerics", "outputs"},
                   "scenario");
    const coords::CoordSystem sys = system_from(require(j, "system", "scenario"));
    separation::Scenario s(j.contains("frame") ? frame_from(sys, j["frame"]) : frame::EulerFrame::identity(sys));
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw SchemaError("scenario.name must be a string");
        s.name = j["name"].get<std::string>();
    }
    if (j.contains("coefficients")) {
        const json& c = j["coefficients"];
        reject_unknown(c, {"F00", "Fa0"}, "coefficients");
        if (c.contains("F00")) s.F.F00 = function_from(c["F00"], "coefficients.F00");
        if (c.contains("Fa0")) s.F.Fa0 = function_triple(c["Fa0"], "coefficients.Fa0");
    }
    if (j.contains("lambda")) s.lambda = vec3(j["lambda"], "lambda");
    if (j.contains("chi")) {
        const json& chi = j["chi"];
        if (!chi.is_array() || chi.size() != 2) throw SchemaError("chi: expected two complex components");
        s.chi = Spinor2(complex_from(chi[0], "chi[0]"), complex_from(chi[1], "chi[1]"));
    }
    s.grid = GridSpec::from_json(require(j, "grid", "scenario"));
    if (j.contains("initial_conditions")) {
        const json& ics = j["initial_conditions"];
        if (!ics.is_array() || ics.size() != 3) throw SchemaError("initial_conditions: expected three records");
        for (std::size_t a = 0; a < 3; ++a) {
            const std::string where = "initial_conditions[" + std::to_string(a) + "]";
            reject_unknown(ics[a], {"value", "slope", "at"}, where);
            if (ics[a].contains("value")) s.ic[a].value = complex_from(ics[a]["value"], where + ".value");
            if (ics[a].contains("slope")) s.ic[a].slope = complex_from(ics[a]["slope"], where + ".slope");
            if (ics[a].contains("at")) s.ic[a].at = number(ics[a]["at"], where + ".at");
        }
    }
    if (j.contains("corruption")) s.corruption = corruption_from(j["corruption"]);

    ScenarioFile file(std::move(s));
    if (j.contains("potential")) {
        file.scenario.eA0_override = closed_form_potential(j["potential"]);
        file.potential = j["potential"];
    }
    if (j.contains("numerics")) {
        const json& n = j["numerics"];
        reject_unknown(n,
                       {"ode_step", "steps_per_unit", "stencil_reach", "resubstitution_tolerance", "h_x", "h_t",
                        "psi_floor", "tolerance"},
                       "numerics");
        if (n.contains("ode_step")) file.scenario.ode_step = number(n["ode_step"], "numerics.ode_step");
        if (n.contains("steps_per_unit")) file.solve.steps_per_unit = integer(n["steps_per_unit"], "numerics.steps_per_unit");
        if (n.contains("stencil_reach")) file.solve.stencil_reach = number(n["stencil_reach"], "numerics.stencil_reach");
        if (n.contains("resubstitution_tolerance")) {
            file.solve.resubstitution_tolerance = number(n["resubstitution_tolerance"], "numerics.resubstitution_tolerance");
        }
        if (n.contains("h_x")) file.residual.h_x = number(n["h_x"], "numerics.h_x");
        if (n.contains("h_t")) file.residual.h_t = number(n["h_t"], "numerics.h_t");
        if (n.contains("psi_floor")) file.residual.psi_floor = number(n["psi_floor"], "numerics.psi_floor");
        if (n.contains("tolerance")) file.tolerance = number(n["tolerance"], "numerics.tolerance");
    }
    if (!(file.scenario.ode_step > 0.0) || file.solve.steps_per_unit < 1 || !(file.residual.h_x > 0.0) ||
        !(file.residual.h_t > 0.0) || !(file.tolerance > 0.0)) {
        throw SchemaError("numerics: steps, spacings and tolerance must be positive");
    }
    file.solve.stencil_reach = std::max({file.solve.stencil_reach, 2.0 * file.residual.h_x, 2.0 * file.residual.h_t});
    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        reject_unknown(o, {"dump_psi", "summary"}, "outputs");
        if (o.contains("dump_psi")) {
            if (!o["dump_psi"].is_string()) throw SchemaError("outputs.dump_psi must be a string");
            file.dump_psi = o["dump_psi"].get<std::string>();
        }
        if (o.contains("summary")) {
            if (!o["summary"].is_string()) throw SchemaError("outputs.summary must be a string");
            file.summary = o["summary"].get<std::string>();
        }
    }
    return file;
}

json ScenarioFile::to_json() const {
    const auto& s = scenario;
    json j;
    if (!s.name.empty()) j["name"] = s.name;
    j["system"] = system_to(s.system());
    j["frame"] = frame_to(s.frame);
    json fa0 = json::array();
    for (const auto& f : s.F.Fa0) fa0.push_back(f.to_json());
    j["coefficients"] = {{"F00", s.F.F00.to_json()}, {"Fa0", fa0}};
    j["lambda"] = {s.lambda.x(), s.lambda.y(), s.lambda.z()};
    j["chi"] = {complex_to(s.chi[0]), complex_to(s.chi[1])};
    j["grid"] = s.grid.to_json();
    json ics = json::array();
    for (const auto& ic : s.ic) {
        json r{{"value", complex_to(ic.value)}, {"slope", complex_to(ic.slope)}};
        if (ic.at) r["at"] = *ic.at;
        ics.push_back(r);
    }
    j["initial_conditions"] = ics;
    if (potential) j["potential"] = *potential;
    if (s.corruption.any()) j["corruption"] = corruption_to(s.corruption);
    j["numerics"] = {{"ode_step", s.ode_step},
                     {"steps_per_unit", solve.steps_per_unit},
                     {"stencil_reach", solve.stencil_reach},
                     {"resubstitution_tolerance", solve.resubstitution_tolerance},
                     {"h_x", residual.h_x},
                     {"h_t", residual.h_t},
                     {"psi_floor", residual.psi_floor},
                     {"tolerance", tolerance}};
    json outputs = json::object();
    if (dump_psi) outputs["dump_psi"] = *dump_psi;
    if (summary) outputs["summary"] = *summary;
    if (!outputs.empty()) j["outputs"] = outputs;
    return j;
}

ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return ScenarioFile::from_json(j);
}

ScenarioFile proposition_file(double q, double c, double k1, double k2, double k3) {
    ScenarioFile file(catalog::proposition_example(q, c, k1, k2, k3));
    file.potential = json{{"kind", "proposition"}, {"q", q}, {"c", c}};
    return file;
}

}  // namespace pauli_sep
