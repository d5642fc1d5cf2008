// pauli-separator: scenario verification, catalog Maxwell checks and frame tabulation.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pauli_sep/catalog.hpp"
#include "pauli_sep/coords.hpp"
#include "pauli_sep/parallel.hpp"
#include "pauli_sep/scenario.hpp"
#include "pauli_sep/separation.hpp"

namespace {

using namespace pauli_sep;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << text;
}

int cmd_list_systems() {
    for (const auto& f : coords::family_catalog()) {
        std::cout << std::setw(2) << f.index << "  " << f.name << "\n"
                  << "    parameters: " << f.parameters << "\n"
                  << "    domain:     " << f.domain << "\n"
                  << "    scales:     " << f.split_class << "\n";
        if (!f.note.empty()) std::cout << "    note:       " << f.note << "\n";
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string path;
    std::string dump_psi;
    std::string summary;
    double tolerance = -1.0;
    double h_x = -1.0;
    double h_t = -1.0;
};

void dump_psi(const std::string& path, const separation::SeparatedSolution& sol,
              const std::vector<separation::GridPoint>& points) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << "t,x1,x2,x3,w1,w2,w3,re_psi1,im_psi1,re_psi2,im_psi2\n";
    out << std::setprecision(17);
    for (const auto& g : points) {
        const Spinor2 psi = sol.psi(g.t, g.x, g.omega);
        out << g.t << ',' << g.x.x() << ',' << g.x.y() << ',' << g.x.z() << ',' << g.omega[0] << ',' << g.omega[1]
            << ',' << g.omega[2] << ',' << psi[0].real() << ',' << psi[0].imag() << ',' << psi[1].real() << ','
            << psi[1].imag() << '\n';
    }
}

int cmd_verify(const VerifyArgs& args) {
    std::optional<ScenarioFile> loaded;
    try {
        loaded = load_scenario(args.path);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    }
    ScenarioFile& file = *loaded;
    if (args.tolerance > 0.0) file.tolerance = args.tolerance;
    if (args.h_x > 0.0) file.residual.h_x = args.h_x;
    if (args.h_t > 0.0) file.residual.h_t = args.h_t;
    file.solve.stencil_reach = std::max({file.solve.stencil_reach, 2.0 * file.residual.h_x, 2.0 * file.residual.h_t});
    const std::string dump_path = !args.dump_psi.empty() ? args.dump_psi : file.dump_psi.value_or("");
    const std::string summary_path = !args.summary.empty() ? args.summary : file.summary.value_or("");
    const auto& s = file.scenario;

    json summary;
    summary["scenario"] = s.name;
    summary["system"] = s.system().name();
    summary["grid"] = s.grid.to_json();
    summary["numerics"] = {{"h_x", file.residual.h_x},
                           {"h_t", file.residual.h_t},
                           {"ode_step", s.ode_step},
                           {"steps_per_unit", file.solve.steps_per_unit},
                           {"psi_floor", file.residual.psi_floor},
                           {"tolerance", file.tolerance}};
    int code = kExitOk;
    std::ostringstream text;
    text << "scenario " << (s.name.empty() ? args.path : s.name) << " (" << s.system().name() << ")\n";
    try {
        const auto points = separation::scenario_points(s);
        std::vector<separation::RankSample> samples;
        samples.reserve(points.size());
        for (const auto& g : points) samples.push_back({g.t, g.omega});
        const auto rank = separation::rank_check(s, samples);
        summary["rank_check"] = {{"ok", rank.ok}, {"min_rank", rank.min_rank}};
        if (!rank.ok) {
            const auto& bad = samples[rank.failing_sample];
            std::ostringstream why;
            why << "rank_check failed: rank " << rank.min_rank << " < 3 at t=" << bad.t << ", omega=("
                << bad.omega[0] << ", " << bad.omega[1] << ", " << bad.omega[2] << ")";
            summary["status"] = "fail";
            summary["diagnostic"] = why.str();
            text << why.str() << "\n";
            code = kExitNumerical;
        } else {
            const auto sol = separation::solve(s, file.solve);
            const auto rep = separation::pauli_residual(s, sol, file.residual);
            const bool pass = rep.max_rel < file.tolerance;
            summary["residual"] = {{"max_rel", rep.max_rel},
                                   {"mean_rel", rep.mean_rel},
                                   {"max_rel_global", rep.max_rel_global},
                                   {"points", rep.points},
                                   {"skipped", rep.skipped},
                                   {"worst_t", rep.worst.t},
                                   {"worst_x", vec_json(rep.worst.x)}};
            summary["status"] = pass ? "pass" : "fail";
            text << "rank_check: ok\n"
                 << "points: " << rep.points << " (skipped " << rep.skipped << ")\n"
                 << "max_rel: " << rep.max_rel << "\nmean_rel: " << rep.mean_rel
                 << "\nmax_rel_global: " << rep.max_rel_global << "\ntolerance: " << file.tolerance << "\n"
                 << "status: " << (pass ? "pass" : "fail") << "\n";
            if (!pass) code = kExitNumerical;
            if (!dump_path.empty()) dump_psi(dump_path, sol, points);
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const Error& e) {
        summary["status"] = "fail";
        summary["diagnostic"] = e.what();
        text << "numerical failure: " << e.what() << "\n";
        code = kExitNumerical;
    }
    std::cout << text.str();
    if (!summary_path.empty()) {
        write_text(summary_path, summary.dump(2) + "\n");
    } else {
        std::cout << summary.dump(2) << "\n";
    }
    return code;
}

struct MaxwellArgs {
    std::string case_id;
    catalog::CatalogParams params;
    bool verbatim = false;
    bool amended = false;
    double h = 1e-2;
    std::string scheme = "richardson4";
    double radius = 0.5;
    double tolerance = 1e-4;
    std::string summary;
};

int cmd_maxwell(MaxwellArgs args) {
    const bool proposition = args.case_id == "proposition";
    catalog::CatalogCase c = catalog::CatalogCase::S2;
    if (!proposition) {
        try {
            c = catalog::case_from_name(args.case_id);
        } catch (const DomainError& e) {
            std::cerr << e.what() << "\n";
            return kExitSchema;
        }
    }
    if (args.verbatim && args.amended) {
        std::cerr << "--verbatim and --amended are exclusive\n";
        return kExitSchema;
    }
    if (args.amended) args.params.s7 = catalog::S7Form::Amended;
    fields::MaxwellOptions options;
    options.h = args.h;
    if (args.scheme == "central2") {
        options.scheme = fields::FdScheme::Central2;
    } else if (args.scheme != "richardson4") {
        std::cerr << "--scheme must be central2 or richardson4\n";
        return kExitSchema;
    }
    json summary;
    summary["case"] = args.case_id;
    try {
        fields::ElectromagneticPotential pot;
        GridSpec grid;
        if (proposition) {
            // Coulomb term plus the quadratic part with k = c.
            catalog::CatalogParams p;
            p.a = args.params.q;
            p.k = args.params.c;
            grid = catalog::catalog_default_grid(catalog::CatalogCase::S2, p);
            grid.exclusions = catalog::catalog_exclusions(catalog::CatalogCase::S2, p, args.radius);
            const double q = args.params.q, cc = args.params.c;
            pot.eH = [cc](double) { return Vec3(0.0, 0.0, cc); };
            pot.eA = [cc](double, const Vec3& x) { return fields::vector_potential(Vec3(0.0, 0.0, cc), x); };
            pot.eA0 = [q, cc](double, const Vec3& x) { return catalog::proposition_A0(q, cc, x); };
            summary["params"] = {{"q", q}, {"c", cc}};
        } else {
            catalog::check_params(c, args.params);
            grid = catalog::catalog_default_grid(c, args.params);
            grid.exclusions = catalog::catalog_exclusions(c, args.params, args.radius);
            pot = catalog::catalog_potential(c, args.params);
            const auto& p = args.params;
            const json all = {{"A", p.A},   {"B", p.B},   {"k", p.k},   {"q", p.q},
                              {"a", p.a},   {"a1", p.a1}, {"a2", p.a2}, {"a3", p.a3}};
            json used = json::object();
            for (const auto& name : catalog::case_parameters(c)) used[name] = all[name];
            summary["params"] = used;
        }
        const auto rep = fields::maxwell_residual(pot, grid, options);
        const bool s7 = !proposition && c == catalog::CatalogCase::S7;
        const bool pass = rep.r_A0 < args.tolerance && rep.r_A < args.tolerance;
        summary["scheme"] = args.scheme;
        summary["h"] = args.h;
        summary["exclusion_radius"] = args.radius;
        summary["points"] = rep.points;
        summary["r_A0"] = rep.r_A0;
        summary["r_A"] = rep.r_A;
        summary["r_gauge_coupling"] = rep.r_gauge_coupling;
        summary["laplacian_A0"] = rep.laplacian_A0;
        summary["worst_point"] = vec_json(rep.worst_point);
        summary["worst_time"] = rep.worst_time;
        summary["tolerance"] = args.tolerance;
        if (s7) {
            summary["unverified"] = true;
            summary["s7_form"] = args.params.s7 == catalog::S7Form::Verbatim ? "verbatim" : "amended";
        }
        summary["status"] = s7 ? "unverified" : (pass ? "pass" : "fail");
        std::cout << "maxwell " << args.case_id << ": r_A0=" << rep.r_A0 << " r_A=" << rep.r_A
                  << " laplacian_A0=" << rep.laplacian_A0 << " points=" << rep.points << " -> "
                  << summary["status"].get<std::string>() << "\n";
        std::cout << summary.dump(2) << "\n";
        if (!args.summary.empty()) write_text(args.summary, summary.dump(2) + "\n");
        if (s7) return kExitOk;
        return pass ? kExitOk : kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

std::array<ScalarFunction, 3> parse_field(const std::string& spec) {
    json j;
    try {
        j = json::parse(spec);
    } catch (const json::parse_error&) {
        try {
            j = json::parse("[" + spec + "]");
        } catch (const json::parse_error&) {
            throw SchemaError("field spec is neither a JSON array nor comma-separated numbers: '" + spec + "'");
        }
    }
    if (!j.is_array() || j.size() != 3) throw SchemaError("field spec needs three components");
    return {ScalarFunction::from_json(j[0]), ScalarFunction::from_json(j[1]), ScalarFunction::from_json(j[2])};
}

int cmd_frame_from_field(const std::string& spec, double t1, double step, const std::string& out_path) {
    std::array<ScalarFunction, 3> comps;
    try {
        comps = parse_field(spec);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    }
    const auto eH = [comps](double t) { return Vec3(comps[0](t), comps[1](t), comps[2](t)); };
    try {
        const auto table = separation::fixed_potential_frame(eH, t1, step);
        const auto angles = separation::unwrapped_euler_angles(table);
        const std::size_t n = table.times.size();
        const double h = n > 1 ? table.times[1] - table.times[0] : step;
        std::ostringstream csv;
        csv << std::setprecision(17);
        csv << "t,O11,O12,O13,O21,O22,O23,O31,O32,O33,alpha,beta,gamma,eH1,eH2,eH3,Omega1,Omega2,Omega3\n";
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const Mat3& o = table.rotations[k];
            Mat3 rate;
            if (k >= 2 && k + 2 < n) {
                rate = (-table.rotations[k + 2] + 8.0 * table.rotations[k + 1] - 8.0 * table.rotations[k - 1] +
                        table.rotations[k - 2]) /
                       (12.0 * h);
            } else {
                rate = -hat(eH(table.times[k])) * o;
            }
            const Vec3 omega = vee(0.5 * (rate * o.transpose() - o * rate.transpose()));
            const Vec3 field = eH(table.times[k]);
            worst = std::max(worst, (omega + field).norm() / (1.0 + field.norm()));
            csv << table.times[k];
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) csv << ',' << o(r, c);
            }
            csv << ',' << angles[k].alpha << ',' << angles[k].beta << ',' << angles[k].gamma;
            csv << ',' << field.x() << ',' << field.y() << ',' << field.z();
            csv << ',' << omega.x() << ',' << omega.y() << ',' << omega.z() << '\n';
        }
        if (out_path.empty() || out_path == "-") {
            std::cout << csv.str();
        } else {
            write_text(out_path, csv.str());
        }
        std::cerr << "rows=" << n << " max|Omega+eH|/(1+|eH|)=" << worst
                  << " orthogonality_defect=" << table.max_orthogonality_defect << "\n";
        if (worst > 1e-6) {
            std::cerr << "angular velocity does not match -eH\n";
            return kExitNumerical;
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separation of variables for the Pauli equation: verification front-end"};
    app.require_subcommand(1);

    app.add_subcommand("list-systems", "Print the eleven coordinate families");

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Solve a scenario and check the Pauli residual");
    v->add_option("scenario", verify.path, "Scenario JSON file")->required();
    v->add_option("--dump-psi", verify.dump_psi, "Write psi on the grid as CSV");
    v->add_option("--summary", verify.summary, "Write the JSON summary to this file");
    v->add_option("--tolerance", verify.tolerance, "Pass threshold for max_rel (default from scenario, 1e-4)");
    v->add_option("--h-x", verify.h_x, "Spatial finite-difference step (default 1e-3)");
    v->add_option("--h-t", verify.h_t, "Time finite-difference step (default 1e-3)");

    MaxwellArgs maxwell;
    auto* m = app.add_subcommand("maxwell", "Finite-difference Maxwell residuals of a catalog potential");
    m->set_help_flag("--help", "Print this help message and exit");
    m->add_option("case", maxwell.case_id, "nonstationary, s1..s7 or proposition")->required();
    auto& p = maxwell.params;
    m->add_option("--A", p.A, "Field slope (non-stationary)");
    m->add_option("--B", p.B, "Field offset (non-stationary)");
    m->add_option("--k", p.k, "Field strength / quadratic coefficient");
    m->add_option("--q", p.q, "Charge (proposition, S7)");
    m->add_option("--c", p.c, "Field strength of the proposition potential");
    m->add_option("--a", p.a, "Coulomb strength (S2) or half-distance (S4, S5)");
    m->add_option("--a1", p.a1);
    m->add_option("--a2", p.a2);
    m->add_option("--a3", p.a3);
    m->add_flag("--verbatim", maxwell.verbatim, "S7 with ln(x1 + x2) (default)");
    m->add_flag("--amended", maxwell.amended, "S7 with ln(x1^2 + x2^2); not canonical");
    m->add_option("--h", maxwell.h, "Finite-difference step (default 1e-2)");
    m->add_option("--scheme", maxwell.scheme, "central2 or richardson4 (default)");
    m->add_option("--radius", maxwell.radius, "Exclusion radius around singular loci (default 0.5)");
    m->add_option("--tolerance", maxwell.tolerance, "Pass threshold (default 1e-4)");
    m->add_option("--summary", maxwell.summary, "Write the JSON summary to this file");

    std::string field = "0,0,1";
    std::string frame_out;
    double t1 = 1.0;
    double step = 1e-3;
    auto* f = app.add_subcommand("frame-from-field", "Integrate the frame rotation driven by eH(t)");
    f->add_option("--field", field, "eH(t): \"h1,h2,h3\" constants or a JSON array of function records");
    f->add_option("--t1", t1, "Final time");
    f->add_option("--step", step, "RK4 step (default 1e-3)");
    f->add_option("--out", frame_out, "CSV output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSchema;
    }

    try {
        if (app.got_subcommand("list-systems")) return cmd_list_systems();
        if (app.got_subcommand("verify")) return cmd_verify(verify);
        if (app.got_subcommand("maxwell")) return cmd_maxwell(maxwell);
        if (app.got_subcommand("frame-from-field")) return cmd_frame_from_field(field, t1, step, frame_out);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitSchema;
}
