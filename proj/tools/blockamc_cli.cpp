// SPDX-License-Identifier: Apache-2.0
//
// blockamc command-line harness:
//   gen    emit a test matrix / right-hand side as CSV
//   solve  run one solver on one system and print the solve report
//   sweep  seeded Monte Carlo sweep from a JSON config
//   cost   area/power/latency report for a given system size
//   plot   render SVG charts from sweep/cost CSV or a solve report
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O failure.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blockamc/blockamc.hpp"

namespace {

using namespace blockamc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct EngineFlags {
    std::string engine = "ideal";
    double r_seg = 1.0;
    double sigma_rel = 0.05;
    double g0 = 100e-6;
    std::string norm = "per_array";
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--engine", engine, "Circuit engine: ideal | network")
            ->check(CLI::IsMember({"ideal", "network"}));
        cmd->add_option("--r-seg", r_seg, "Wire segment resistance [ohm]");
        cmd->add_option("--sigma", sigma_rel, "Programming noise std relative to G0");
        cmd->add_option("--g0", g0, "Unit conductance [S]");
        cmd->add_option("--norm", norm, "Normalization: per_array | global")
            ->check(CLI::IsMember({"per_array", "global"}));
        cmd->add_option("--seed", seed, "Noise seed");
    }

    solver::SolveOptions options() const {
        solver::SolveOptions opt;
        opt.map.g0 = g0;
        opt.map.sigma_rel = sigma_rel;
        opt.circuit.engine =
            engine == "ideal" ? analog::Engine::ideal : analog::Engine::network;
        opt.circuit.r_seg = r_seg;
        opt.norm = norm == "per_array" ? solver::NormMode::per_array
                                       : solver::NormMode::global;
        opt.seed = seed;
        return opt;
    }
};

struct GenFlags {
    std::string kind = "wishart";
    Index n = 0;
    std::uint64_t seed = 0;
    Index wishart_m = 0;
    double diag_boost = 1.0;

    void attach(CLI::App* cmd, bool required) {
        auto* o = cmd->add_option("--kind", kind,
                                  "Matrix kind: wishart | toeplitz | uniform")
                      ->check(CLI::IsMember({"wishart", "toeplitz", "uniform"}));
        auto* p = cmd->add_option("-n,--size", n, "System size");
        cmd->add_option("--gen-seed", seed, "Generator seed");
        cmd->add_option("--wishart-m", wishart_m, "Rows of the Gaussian factor (0 = n)");
        cmd->add_option("--diag-boost", diag_boost, "Diagonal boost (toeplitz/uniform)");
        if (required) {
            o->required();
            p->required();
        }
    }

    matgen::GenSpec spec() const {
        matgen::GenSpec s;
        s.kind = matgen::kind_from_name(kind);
        s.n = n;
        s.seed = seed;
        s.wishart_m = wishart_m;
        s.diag_boost = diag_boost;
        return s;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"BlockAMC analog matrix-computing simulator and benchmark harness"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate a test matrix / rhs as CSV");
    GenFlags gen_flags;
    gen_flags.attach(gen, true);
    std::string gen_out = "matrix.csv";
    std::string gen_rhs_out;
    std::uint64_t gen_rhs_seed = 0;
    gen->add_option("-o,--out", gen_out, "Matrix CSV path");
    gen->add_option("--rhs-out", gen_rhs_out, "Also write a rhs vector CSV here");
    gen->add_option("--rhs-seed", gen_rhs_seed, "Seed for the rhs vector");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "Solve one system with one solver");
    std::string solve_solver = "one_stage";
    int solve_depth = 2;
    std::string matrix_path, rhs_path, report_path;
    Index solve_split = 0;
    Index solve_array_max = 0;
    GenFlags solve_gen;
    EngineFlags solve_engine;
    solve->add_option("--solver", solve_solver,
                      "original | one_stage | two_stage")
        ->check(CLI::IsMember({"original", "one_stage", "two_stage"}));
    solve->add_option("--depth", solve_depth, "Recursion depth for two_stage (>= 2)");
    solve->add_option("--matrix", matrix_path, "Matrix CSV (else generated)");
    solve->add_option("--rhs", rhs_path, "Rhs CSV (else generated)");
    solve->add_option("--split", solve_split, "Pivot block size k (0 = ceil(n/2))");
    solve->add_option("--array-max", solve_array_max, "Largest physical array dimension");
    solve->add_option("--report", report_path, "Write the JSON report here (else stdout)");
    solve_gen.attach(solve, false);
    solve_engine.attach(solve);

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep from a JSON config");
    std::string sweep_config_path, sweep_out_dir = "sweep_out";
    bool sweep_plots = false;
    bool sweep_quiet = false;
    sweep->add_option("--config", sweep_config_path, "Sweep config JSON")->required();
    sweep->add_option("-o,--out", sweep_out_dir, "Output directory");
    sweep->add_flag("--plots", sweep_plots, "Also render SVG charts");
    sweep->add_flag("-q,--quiet", sweep_quiet, "Suppress progress output");

    // ---- cost ----
    auto* cost_cmd = app.add_subcommand("cost", "Area/power/latency cost report");
    Index cost_n = 512;
    std::string cost_calib, cost_json_out, cost_csv_out;
    std::vector<std::string> cost_solvers = {"original", "one_stage", "two_stage"};
    Index cost_array_max = 0;
    cost_cmd->add_option("-n,--size", cost_n, "System size");
    cost_cmd->add_option("--calib", cost_calib, "Calibration config JSON")->required();
    cost_cmd->add_option("--solvers", cost_solvers, "Solver variants to report");
    cost_cmd->add_option("--array-max", cost_array_max,
                         "Array size cap for the two-stage tile schedule");
    cost_cmd->add_option("--json", cost_json_out, "Write JSON report here (else stdout)");
    cost_cmd->add_option("--csv", cost_csv_out, "Write CSV breakdown here");

    // ---- plot ----
    auto* plot_cmd = app.add_subcommand("plot", "Render SVG charts from artifacts");
    std::string plot_records, plot_report, plot_cost, plot_out_dir = ".";
    plot_cmd->add_option("--records", plot_records, "records.csv from a sweep");
    plot_cmd->add_option("--report", plot_report, "solve report JSON (element overlay)");
    plot_cmd->add_option("--cost", plot_cost, "cost breakdown CSV");
    plot_cmd->add_option("-o,--out", plot_out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (gen->parsed()) {
        const Matrix a = matgen::generate(gen_flags.spec());
        write_matrix_csv(gen_out, a);
        std::cerr << "wrote " << gen_out << " (" << a.rows() << "x" << a.cols() << ")\n";
        if (!gen_rhs_out.empty()) {
            write_vector_csv(gen_rhs_out, matgen::gen_rhs(gen_flags.n, gen_rhs_seed));
            std::cerr << "wrote " << gen_rhs_out << "\n";
        }
        return kExitOk;
    }

    if (solve->parsed()) {
        Matrix a;
        Vector b;
        if (!matrix_path.empty()) {
            a = read_matrix_csv(matrix_path);
        } else {
            GenFlags g = solve_gen;
            if (g.n == 0) throw ConfigError("solve: need --matrix or --kind/-n");
            a = matgen::generate(g.spec());
        }
        if (!rhs_path.empty()) {
            b = read_vector_csv(rhs_path);
        } else {
            b = matgen::gen_rhs(a.rows(), derive_seed(solve_engine.seed, "rhs"));
        }
        auto opt = solve_engine.options();
        opt.split = solve_split;
        opt.plan.array_max = solve_array_max;
        opt.plan.depth = bench::solver_depth(solve_solver, solve_depth);
        if (opt.plan.depth >= 2 && opt.plan.array_max == 0) {
            Index d = 1;
            for (int i = 0; i < opt.plan.depth; ++i) d *= 2;
            opt.plan.array_max = (a.rows() + d - 1) / d;
        }
        auto rep = solver::solve_multi_stage(a, b, opt.plan, opt);
        rep.relative_error = bench::relative_error(solve_dense(a, b), rep.x_hat);
        const std::string text = to_json(rep, &opt).dump(2) + "\n";
        if (report_path.empty()) {
            std::cout << text;
        } else {
            write_text_file(report_path, text);
            std::cerr << "wrote " << report_path << "\n";
        }
        return kExitOk;
    }

    if (sweep->parsed()) {
        const auto cfg = bench::load_sweep_config(sweep_config_path);
        if (cfg.engine == analog::Engine::network && cfg.allow_large_network)
            std::cerr << "warning: large network-engine sizes enabled; "
                         "this can take a long time\n";
        const auto records = bench::run_sweep(cfg, sweep_quiet ? nullptr : &std::cerr);
        const auto files = bench::emit(records, cfg, sweep_out_dir, sweep_plots);
        for (const auto& f : files) std::cerr << "wrote " << sweep_out_dir << "/" << f << "\n";
        return kExitOk;
    }

    if (cost_cmd->parsed()) {
        const auto calib = cost::load_cost_config(cost_calib);
        std::vector<cost::CostReport> reports;
        nlohmann::json out = nlohmann::json::array();
        for (const auto& name : cost_solvers) {
            reports.push_back(cost::make_cost_report(cost::variant_from_name(name),
                                                     cost_n, calib, cost_array_max));
            out.push_back(to_json(reports.back()));
        }
        const std::string text = out.dump(2) + "\n";
        if (cost_json_out.empty()) {
            std::cout << text;
        } else {
            write_text_file(cost_json_out, text);
            std::cerr << "wrote " << cost_json_out << "\n";
        }
        if (!cost_csv_out.empty()) {
            write_text_file(cost_csv_out, cost::cost_reports_csv(reports));
            std::cerr << "wrote " << cost_csv_out << "\n";
        }
        return kExitOk;
    }

    if (plot_cmd->parsed()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(plot_out_dir, ec);
        bool did = false;
        if (!plot_records.empty()) {
            // reconstruct aggregates from the records CSV
            const Matrix dummy;  // unused
            std::vector<bench::SweepRecord> recs;
            std::istringstream in(read_text_file(plot_records));
            std::string line;
            std::getline(in, line);  // header
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::istringstream ls(line);
                std::string kind, size, solver, trial, seed, status, rel;
                std::getline(ls, kind, ',');
                std::getline(ls, size, ',');
                std::getline(ls, solver, ',');
                std::getline(ls, trial, ',');
                std::getline(ls, seed, ',');
                std::getline(ls, status, ',');
                std::getline(ls, rel, ',');
                bench::SweepRecord r;
                r.kind = matgen::kind_from_name(kind);
                r.size = std::stoll(size);
                r.solver = solver;
                r.trial = std::stoi(trial);
                r.seed = std::stoull(seed);
                r.ok = (status == "ok");
                r.rel_error = std::stod(rel);
                recs.push_back(std::move(r));
            }
            const auto aggs = bench::aggregate(recs);
            std::vector<matgen::Kind> kinds;
            for (const auto& a : aggs)
                if (std::find(kinds.begin(), kinds.end(), a.kind) == kinds.end())
                    kinds.push_back(a.kind);
            for (auto kind : kinds) {
                const std::string name =
                    "error_vs_size_" + matgen::kind_name(kind) + ".svg";
                write_text_file((fs::path(plot_out_dir) / name).string(),
                                plot::error_vs_size_svg(aggs, kind));
                std::cerr << "wrote " << plot_out_dir << "/" << name << "\n";
            }
            did = true;
        }
        if (!plot_report.empty()) {
            const auto j = nlohmann::json::parse(read_text_file(plot_report));
            const Vector x_hat = vector_from_json(j.at("x_hat"));
            std::vector<std::pair<std::string, Vector>> est;
            est.emplace_back(j.value("solver", "estimate"), x_hat);
            // overlay against a reference if the report contains one,
            // otherwise against the estimate itself
            Vector ref = x_hat;
            if (j.contains("reference")) ref = vector_from_json(j.at("reference"));
            write_text_file((fs::path(plot_out_dir) / "solution_overlay.svg").string(),
                            plot::overlay_svg(ref, est, "solution overlay"));
            std::cerr << "wrote " << plot_out_dir << "/solution_overlay.svg\n";
            did = true;
        }
        if (!plot_cost.empty()) {
            // cost CSV rows: solver,component,count,area_mm2,power_w
            std::istringstream in(read_text_file(plot_cost));
            std::string line;
            std::getline(in, line);
            std::map<std::string, cost::CostReport> by_solver;
            std::vector<std::string> order;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::istringstream ls(line);
                std::string solver, comp, count, area, power;
                std::getline(ls, solver, ',');
                std::getline(ls, comp, ',');
                std::getline(ls, count, ',');
                std::getline(ls, area, ',');
                std::getline(ls, power, ',');
                if (!by_solver.count(solver)) {
                    order.push_back(solver);
                    by_solver[solver].kind = cost::variant_from_name(solver);
                }
                auto& r = by_solver[solver];
                const double a = std::stod(area), p = std::stod(power);
                if (comp == "opa") { r.area.opa = a; r.power.opa = p; }
                else if (comp == "dac") { r.area.dac = a; r.power.dac = p; }
                else if (comp == "adc") { r.area.adc = a; r.power.adc = p; }
                else if (comp == "cells") { r.area.cells = a; r.power.cells = p; }
            }
            std::vector<cost::CostReport> reports;
            for (const auto& s : order) reports.push_back(by_solver[s]);
            write_text_file((fs::path(plot_out_dir) / "cost_area.svg").string(),
                            plot::cost_breakdown_svg(reports, true, "area breakdown"));
            write_text_file((fs::path(plot_out_dir) / "cost_power.svg").string(),
                            plot::cost_breakdown_svg(reports, false, "power breakdown"));
            std::cerr << "wrote " << plot_out_dir << "/cost_area.svg, cost_power.svg\n";
            did = true;
        }
        if (!did) throw ConfigError("plot: pass --records, --report and/or --cost");
        return kExitOk;
    }

    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
