/*
 * tools/fracbiot_cli.cpp
 *
 * Copyright 2026 The fracbiot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: fracbiot <subcommand> --config FILE [--out DIR] [--jobs N] [--slow]
//
// Exit codes: 0 success, 1 invalid input (configuration, exponents, geometry),
// 2 solver failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracbiot/config.hpp"
#include "fracbiot/errors.hpp"
#include "fracbiot/io.hpp"
#include "fracbiot/limit_solver.hpp"
#include "fracbiot/study.hpp"

namespace fs = std::filesystem;
using namespace fracbiot;

namespace {

struct Options {
    std::string config;
    std::string out = "fracbiot_out";
    int jobs = 1;
    bool slow = false;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("output", "cannot write " + path.string());
    return os;
}

void echo_config(const RunConfig& cfg, const fs::path& out) {
    ensure_directory(out);
    auto os = open_output(out / "config.json");
    os << cfg.to_json().dump(2) << '\n';
}

void print_regime(const RegimeDescriptor& r) {
    std::cout << "regime: " << to_string(r.flow) << ", " << to_string(r.mech) << '\n'
              << "storage_present: " << r.storage_present << '\n'
              << "biot_coupled: " << r.biot_coupled << '\n'
              << "flow_source_present: " << r.flow_source_present << '\n'
              << "mech_source_present: " << r.mech_source_present << '\n'
              << "W_is_zero: " << r.W_is_zero << '\n';
}

int cmd_check(const RunConfig& cfg, const Options&) {
    cfg.geometry.validate();
    const RegimeDescriptor r = validate_exponents(cfg.exponents, cfg.geometry);
    print_regime(r);
    const FracturedMesh mesh = build_mesh(cfg.geometry, cfg.h);
    LimitOptions lo;
    lo.prefer_reduced = cfg.prefer_reduced;
    const LimitProblem pb = build_limit_problem(mesh, cfg.build_materials(), cfg.exponents, lo);
    std::cout << "limit forms: " << to_string(pb.mech_form) << ", " << to_string(pb.flow_form)
              << (pb.fracture_ode ? " + fracture ODE" : "") << '\n';
    return 0;
}

int cmd_mesh_dump(const RunConfig& cfg, const Options& o) {
    const FracturedMesh mesh = build_mesh(cfg.geometry, cfg.h);
    echo_config(cfg, o.out);
    auto os = open_output(fs::path(o.out) / "mesh.txt");
    dump_mesh(mesh, os);
    std::cout << "mesh: " << mesh.vertex_count() << " vertices, " << mesh.triangle_count() << " triangles\n";
    return 0;
}

int cmd_solve_full(const RunConfig& cfg, const Options& o) {
    validate_exponents(cfg.exponents, cfg.geometry);
    const FracturedMesh mesh = build_mesh(cfg.geometry, cfg.h);
    const TransientSolution sol = solve_transient(mesh, cfg.full_run());
    echo_config(cfg, o.out);
    dump_solution(mesh, sol, (fs::path(o.out) / "solution").string(), cfg.hash());
    std::cout << "solve-full: " << sol.times.size() << " time levels written to " << o.out << '\n';
    return 0;
}

int cmd_solve_limit(const RunConfig& cfg, const Options& o) {
    const FracturedMesh mesh = build_mesh(cfg.geometry, cfg.h);
    const MaterialFields materials = cfg.build_materials();
    LimitOptions lo;
    lo.prefer_reduced = cfg.prefer_reduced;
    const LimitProblem pb = build_limit_problem(mesh, materials, cfg.exponents, lo);
    const TransientSolution sol = solve_limit(pb, materials, cfg.T, cfg.dt);
    echo_config(cfg, o.out);
    dump_solution(mesh, sol, (fs::path(o.out) / "limit").string(), cfg.hash());
    std::cout << "solve-limit: " << to_string(pb.mech_form) << ", " << to_string(pb.flow_form) << ", "
              << sol.times.size() << " time levels written to " << o.out << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const Options& o) {
    const SweepConfig sc = cfg.sweep(o.jobs, o.slow);
    validate_eps_list(sc.eps_list);
    sc.geometry.validate();
    const FracturedMesh mesh = build_mesh(sc.geometry, sc.h);
    const SweepRuns runs = run_sweep_solutions(mesh, sc);
    const ErrorReport report = make_report(mesh, runs, sc);
    const AprioriReport apriori = check_apriori(mesh, sc.eps_list, runs.full, sc.exponents);

    echo_config(cfg, o.out);
    const fs::path out(o.out);
    auto csv = open_output(out / "report.csv");
    report.write_csv(csv);
    auto verdicts = open_output(out / "verdicts.txt");
    report.write_verdicts(verdicts);
    auto ap = open_output(out / "apriori.csv");
    ap << csv_row({"quantity", "epsilon", "value", "ratio", "flagged"});
    for (const auto& q : apriori.quantities)
        for (std::size_t i = 0; i < q.values.size(); ++i)
            ap << csv_row({q.name, format_double(sc.eps_list[i]), format_double(q.values[i]),
                           format_double(q.ratio), q.flagged ? "1" : "0"});
    report.write_verdicts(std::cout);
    return 0;
}

int cmd_effective(const RunConfig& cfg, const Options& o) {
    const RegimeDescriptor r = validate_exponents(cfg.exponents, cfg.geometry);
    const FracturedMesh mesh = build_mesh(cfg.geometry, cfg.h);
    const EffectiveParams ep = compute_effective(cfg.build_materials(), cfg.exponents, r, mesh);
    echo_config(cfg, o.out);
    auto os = open_output(fs::path(o.out) / "effective.csv");
    os << csv_row({"gamma_node", "y", "aperture", "C_gamma_N_xx", "C_gamma_N_xy", "C_gamma_N_yx", "C_gamma_N_yy",
                   "K_gamma_xx", "K_gamma_xy", "K_gamma_yx", "K_gamma_yy", "K_gamma_N"});
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        const Mat2& C = ep.C_gamma_N[j];
        const Mat2& K = ep.K_gamma[j];
        os << csv_row({std::to_string(j), format_double(ep.y[j]), format_double(ep.aperture[j]),
                       format_double(C(0, 0)), format_double(C(0, 1)), format_double(C(1, 0)),
                       format_double(C(1, 1)), format_double(K(0, 0)), format_double(K(0, 1)),
                       format_double(K(1, 0)), format_double(K(1, 1)), format_double(ep.K_gamma_N[j])});
    }
    std::cout << "effective: " << mesh.gamma_count() << " gamma nodes written to " << o.out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracbiot: Biot poroelasticity in a thin fracture and its limit models"};
    app.require_subcommand(1);
    Options opt;
    using Handler = int (*)(const RunConfig&, const Options&);
    const std::pair<const char*, const char*> names[] = {
        {"solve-full", "solve the transformed epsilon problem"},
        {"solve-limit", "solve the limit model of the configured regime"},
        {"sweep", "run an epsilon sweep and write the error report"},
        {"effective", "export the effective interface coefficients"},
        {"check", "validate the configuration and print the regime"},
        {"mesh-dump", "write the fractured mesh as text"},
    };
    const Handler handlers[] = {cmd_solve_full, cmd_solve_limit, cmd_sweep, cmd_effective, cmd_check, cmd_mesh_dump};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : names) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config_file", opt.config, "configuration file (JSON)");
        sub->add_option("--config", opt.config, "configuration file (JSON)");
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        sub->add_option("--jobs", opt.jobs, "parallel epsilon runs")->check(CLI::PositiveNumber);
        sub->add_flag("--slow", opt.slow, "extend the sweep by one more halving of epsilon");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (opt.config.empty()) throw ValidationError("config", "a configuration file is required");
        const RunConfig cfg = load_config(opt.config);
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return handlers[i](cfg, opt);
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error [" << e.clause() << "]: " << e.what() << '\n';
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    }
}
