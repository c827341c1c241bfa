// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockamc/io.hpp"
#include "blockamc/matgen.hpp"
#include "blockamc/serialize.hpp"
#include "blockamc/solver.hpp"
#include "blockamc/types.hpp"

namespace blockamc::bench {

/// Relative error between a reference and an estimated solution:
/// sum_i |x_i - xhat_i| / sum_i |x_i|.
inline double relative_error(const Vector& x_ref, const Vector& x_hat) {
    if (x_ref.size() != x_hat.size())
        throw DimensionError("relative_error: length mismatch");
    const double denom = x_ref.cwiseAbs().sum();
    if (denom == 0.0) throw ConfigError("relative_error: all-zero reference");
    return (x_ref - x_hat).cwiseAbs().sum() / denom;
}

/// Monte Carlo sweep configuration. Everything downstream (matrices,
/// right-hand sides, device noise) derives deterministically from the
/// master seed.
struct SweepConfig {
    std::vector<matgen::Kind> kinds = {matgen::Kind::wishart, matgen::Kind::toeplitz};
    std::vector<Index> sizes = {8, 16, 32, 64, 128, 256, 512};
    int trials = 40;
    std::vector<std::string> solvers = {"original", "one_stage"};
    int depth = 2;  ///< recursion depth used by the "two_stage" solver
    analog::Engine engine = analog::Engine::ideal;
    double r_seg = 1.0;
    double sigma_rel = 0.05;
    double g0 = 100e-6;
    solver::NormMode norm = solver::NormMode::per_array;
    Index wishart_m = 0;            ///< absolute Gaussian-factor rows (0 = n)
    double wishart_m_factor = 0.0;  ///< m = round(factor * n) per size; overrides wishart_m
    double diag_boost = 1.0;        ///< absolute diagonal boost (toeplitz/uniform)
    double diag_boost_factor = 0.0; ///< boost = factor * n per size; overrides diag_boost
    std::uint64_t seed = 1;
    bool allow_large_network = false;  ///< permit network-engine sizes > 128
};

inline constexpr Index kNetworkSizeCap = 128;

inline void validate(const SweepConfig& c) {
    if (c.kinds.empty()) throw ConfigError("sweep: no matrix kinds");
    if (c.sizes.empty()) throw ConfigError("sweep: no sizes");
    if (c.trials < 1) throw ConfigError("sweep: trials must be >= 1");
    if (c.solvers.empty()) throw ConfigError("sweep: no solvers");
    if (c.depth < 0) throw ConfigError("sweep: depth must be >= 0");
    for (const auto& s : c.solvers)
        if (s != "original" && s != "one_stage" && s != "two_stage")
            throw ConfigError("sweep: unknown solver '" + s + "'");
    for (Index n : c.sizes) {
        if (n < 2) throw ConfigError("sweep: sizes must be >= 2");
        if (c.engine == analog::Engine::network && n > kNetworkSizeCap &&
            !c.allow_large_network)
            throw ConfigError(
                "sweep: network-engine sizes above " + std::to_string(kNetworkSizeCap) +
                " are slow; set allow_large_network to run them anyway");
    }
}

/// One (kind, size, solver, trial) outcome. wall_ms is kept in memory for
/// interactive use but never serialized: emitted artifacts must be
/// byte-identical across runs.
struct SweepRecord {
    matgen::Kind kind = matgen::Kind::wishart;
    Index size = 0;
    std::string solver;
    int trial = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double rel_error = std::numeric_limits<double>::quiet_NaN();
    std::string error;
    double wall_ms = 0.0;
};

inline int solver_depth(const std::string& name, int two_stage_depth) {
    if (name == "original") return 0;
    if (name == "one_stage") return 1;
    if (name == "two_stage") return two_stage_depth;
    throw ConfigError("unknown solver '" + name + "'");
}

inline solver::SolveOptions solve_options_for(const SweepConfig& cfg,
                                              const std::string& solver_name,
                                              Index n, std::uint64_t noise_seed) {
    solver::SolveOptions opt;
    opt.map.g0 = cfg.g0;
    opt.map.sigma_rel = cfg.sigma_rel;
    opt.circuit.engine = cfg.engine;
    opt.circuit.r_seg = cfg.r_seg;
    opt.norm = cfg.norm;
    opt.seed = noise_seed;
    opt.plan.depth = solver_depth(solver_name, cfg.depth);
    if (opt.plan.depth >= 2) {
        Index d = 1;
        for (int i = 0; i < opt.plan.depth; ++i) d *= 2;
        opt.plan.array_max = (n + d - 1) / d;
    }
    opt.keep_intermediates = false;
    return opt;
}

/// Runs the full sweep. Trials are independent; a failure (e.g. a
/// singular draw) is recorded on its own record and never aborts the
/// sweep. Record order is the deterministic loop order
/// kind > size > trial > solver.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg,
                                          std::ostream* progress = nullptr) {
    validate(cfg);
    std::vector<SweepRecord> records;
    records.reserve(cfg.kinds.size() * cfg.sizes.size() *
                    static_cast<std::size_t>(cfg.trials) * cfg.solvers.size());

    for (const auto kind : cfg.kinds) {
        for (const Index n : cfg.sizes) {
            if (progress)
                *progress << "sweep: " << matgen::kind_name(kind) << " n=" << n
                          << " (" << cfg.trials << " trials)" << std::endl;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                const std::uint64_t trial_seed =
                    derive_seed(cfg.seed, matgen::kind_name(kind),
                                static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(trial));
                matgen::GenSpec spec;
                spec.kind = kind;
                spec.n = n;
                spec.seed = derive_seed(trial_seed, "matrix");
                spec.wishart_m =
                    cfg.wishart_m_factor > 0
                        ? static_cast<Index>(std::llround(cfg.wishart_m_factor *
                                                          static_cast<double>(n)))
                        : cfg.wishart_m;
                spec.diag_boost = cfg.diag_boost_factor > 0
                                      ? cfg.diag_boost_factor * static_cast<double>(n)
                                      : cfg.diag_boost;

                Matrix a;
                Vector b, x_ref;
                std::string gen_error;
                try {
                    a = matgen::generate(spec);
                    b = matgen::gen_rhs(n, derive_seed(trial_seed, "rhs"));
                    x_ref = solve_dense(a, b);
                } catch (const Error& e) {
                    gen_error = e.what();
                }

                for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
                    const auto& sname = cfg.solvers[si];
                    SweepRecord rec;
                    rec.kind = kind;
                    rec.size = n;
                    rec.solver = sname;
                    rec.trial = trial;
                    rec.seed = trial_seed;
                    if (!gen_error.empty()) {
                        rec.error = gen_error;
                        records.push_back(std::move(rec));
                        continue;
                    }
                    const auto opt = solve_options_for(
                        cfg, sname, n, derive_seed(trial_seed, "noise", si));
                    const auto t0 = std::chrono::steady_clock::now();
                    try {
                        auto rep = solver::solve_multi_stage(a, b, opt.plan, opt);
                        rec.rel_error = relative_error(x_ref, rep.x_hat);
                        rec.ok = true;
                    } catch (const Error& e) {
                        rec.error = e.what();
                    }
                    rec.wall_ms = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count();
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    return records;
}

/// Per-(kind, size, solver) sample statistics over successful records.
struct Aggregate {
    matgen::Kind kind = matgen::Kind::wishart;
    Index size = 0;
    std::string solver;
    int count = 0;   ///< all records in the group
    int ok = 0;      ///< successful records (statistics cover these)
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation (n-1)
    double min = 0.0, p25 = 0.0, median = 0.0, p75 = 0.0, max = 0.0;
};

/// Linear-interpolation quantile of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline std::vector<Aggregate> aggregate(const std::vector<SweepRecord>& records) {
    // group in first-appearance order to keep output deterministic
    std::vector<Aggregate> out;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<double>> samples;
    for (const auto& r : records) {
        const std::string key = matgen::kind_name(r.kind) + "|" +
                                std::to_string(r.size) + "|" + r.solver;
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            Aggregate a;
            a.kind = r.kind;
            a.size = r.size;
            a.solver = r.solver;
            out.push_back(std::move(a));
            samples.emplace_back();
        }
        auto& agg = out[it->second];
        ++agg.count;
        if (r.ok) {
            ++agg.ok;
            samples[it->second].push_back(r.rel_error);
        }
    }
    std::vector<Aggregate> kept;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& agg = out[i];
        auto& s = samples[i];
        if (s.empty()) continue;  // groups with no successful trial are excluded
        std::sort(s.begin(), s.end());
        double sum = 0.0;
        for (double v : s) sum += v;
        agg.mean = sum / static_cast<double>(s.size());
        double var = 0.0;
        for (double v : s) var += (v - agg.mean) * (v - agg.mean);
        agg.stddev = s.size() > 1 ? std::sqrt(var / static_cast<double>(s.size() - 1)) : 0.0;
        agg.min = s.front();
        agg.p25 = quantile_sorted(s, 0.25);
        agg.median = quantile_sorted(s, 0.50);
        agg.p75 = quantile_sorted(s, 0.75);
        agg.max = s.back();
        kept.push_back(agg);
    }
    return kept;
}

/// Per-record CSV; stable column order, no timing columns, byte-identical
/// for identical records.
inline std::string records_csv(const std::vector<SweepRecord>& records) {
    std::string out = "kind,size,solver,trial,seed,status,rel_error\n";
    for (const auto& r : records) {
        out += matgen::kind_name(r.kind);
        out += ',' + std::to_string(r.size);
        out += ',' + r.solver;
        out += ',' + std::to_string(r.trial);
        out += ',' + std::to_string(r.seed);
        out += r.ok ? ",ok," : ",failed,";
        out += format_double(r.rel_error);
        out += '\n';
    }
    return out;
}

inline std::string aggregates_csv(const std::vector<Aggregate>& aggs) {
    std::string out =
        "kind,size,solver,count,ok,mean,stddev,min,p25,median,p75,max\n";
    for (const auto& a : aggs) {
        out += matgen::kind_name(a.kind);
        out += ',' + std::to_string(a.size);
        out += ',' + a.solver;
        out += ',' + std::to_string(a.count);
        out += ',' + std::to_string(a.ok);
        for (double v : {a.mean, a.stddev, a.min, a.p25, a.median, a.p75, a.max})
            out += ',' + format_double(v);
        out += '\n';
    }
    return out;
}

inline nlohmann::json to_json(const SweepConfig& c) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : c.kinds) kinds.push_back(matgen::kind_name(k));
    return {{"kinds", kinds},
            {"sizes", c.sizes},
            {"trials", c.trials},
            {"solvers", c.solvers},
            {"depth", c.depth},
            {"engine", c.engine == analog::Engine::ideal ? "ideal" : "network"},
            {"r_seg_ohm", c.r_seg},
            {"sigma_rel", c.sigma_rel},
            {"g0_s", c.g0},
            {"normalization",
             c.norm == solver::NormMode::per_array ? "per_array" : "global"},
            {"wishart_m", c.wishart_m},
            {"wishart_m_factor", c.wishart_m_factor},
            {"diag_boost", c.diag_boost},
            {"diag_boost_factor", c.diag_boost_factor},
            {"seed", c.seed},
            {"allow_large_network", c.allow_large_network}};
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig c;
    try {
        if (j.contains("kinds")) {
            c.kinds.clear();
            for (const auto& k : j.at("kinds"))
                c.kinds.push_back(matgen::kind_from_name(k.get<std::string>()));
        }
        if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<Index>>();
        if (j.contains("trials")) c.trials = j.at("trials").get<int>();
        if (j.contains("solvers"))
            c.solvers = j.at("solvers").get<std::vector<std::string>>();
        if (j.contains("depth")) c.depth = j.at("depth").get<int>();
        if (j.contains("engine")) {
            const auto e = j.at("engine").get<std::string>();
            if (e == "ideal") c.engine = analog::Engine::ideal;
            else if (e == "network") c.engine = analog::Engine::network;
            else throw ConfigError("unknown engine '" + e + "'");
        }
        if (j.contains("r_seg_ohm")) c.r_seg = j.at("r_seg_ohm").get<double>();
        if (j.contains("sigma_rel")) c.sigma_rel = j.at("sigma_rel").get<double>();
        if (j.contains("g0_s")) c.g0 = j.at("g0_s").get<double>();
        if (j.contains("normalization")) {
            const auto m = j.at("normalization").get<std::string>();
            if (m == "per_array") c.norm = solver::NormMode::per_array;
            else if (m == "global") c.norm = solver::NormMode::global;
            else throw ConfigError("unknown normalization '" + m + "'");
        }
        if (j.contains("wishart_m")) c.wishart_m = j.at("wishart_m").get<Index>();
        if (j.contains("wishart_m_factor"))
            c.wishart_m_factor = j.at("wishart_m_factor").get<double>();
        if (j.contains("diag_boost")) c.diag_boost = j.at("diag_boost").get<double>();
        if (j.contains("diag_boost_factor"))
            c.diag_boost_factor = j.at("diag_boost_factor").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("allow_large_network"))
            c.allow_large_network = j.at("allow_large_network").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad sweep config: ") + e.what());
    }
    validate(c);
    return c;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path), nullptr, true,
                                  /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad sweep config '" + path + "': " + e.what());
    }
    return sweep_config_from_json(j);
}

/// Deterministic run manifest: config echo, seed derivation scheme and
/// the emitted file list. No timestamps or timings.
inline nlohmann::json manifest_json(const SweepConfig& cfg,
                                    const std::vector<std::string>& files) {
    return {{"tool", "blockamc"},
            {"schema", 1},
            {"config", to_json(cfg)},
            {"seed_derivation",
             "trial_seed = derive(master, kind, size, trial); noise seed per "
             "solver = derive(trial_seed, 'noise', solver_index); array seeds "
             "= derive(noise_seed, 'array', path_hash)"},
            {"files", files}};
}

} // namespace blockamc::bench
