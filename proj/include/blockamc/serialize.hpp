// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include <json.hpp>

#include "blockamc/cost.hpp"
#include "blockamc/mapping.hpp"
#include "blockamc/solver.hpp"
#include "blockamc/types.hpp"

namespace blockamc {

inline nlohmann::json to_json(const Vector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

inline nlohmann::json to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Vector vector_from_json(const nlohmann::json& a) {
    Vector v(static_cast<Index>(a.size()));
    Index i = 0;
    for (const auto& x : a) v(i++) = x.get<double>();
    return v;
}

inline Matrix matrix_from_json(const nlohmann::json& rows) {
    if (rows.empty()) return Matrix(0, 0);
    Matrix m(static_cast<Index>(rows.size()),
             static_cast<Index>(rows.front().size()));
    Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Index>(row.size()) != m.cols())
            throw IoError("ragged JSON matrix");
        Index j = 0;
        for (const auto& x : row) m(i, j++) = x.get<double>();
        ++i;
    }
    return m;
}

namespace mapping_json {

inline nlohmann::json to_json(const mapping::ProgrammedArray& a) {
    return {{"g_plus_s", blockamc::to_json(a.g_plus)},
            {"g_minus_s", blockamc::to_json(a.g_minus)},
            {"scale", a.scale},
            {"g0_s", a.g0},
            {"seed", a.seed}};
}

inline mapping::ProgrammedArray from_json(const nlohmann::json& j) {
    mapping::ProgrammedArray a;
    a.g_plus = matrix_from_json(j.at("g_plus_s"));
    a.g_minus = matrix_from_json(j.at("g_minus_s"));
    a.scale = j.at("scale").get<double>();
    a.g0 = j.at("g0_s").get<double>();
    a.seed = j.at("seed").get<std::uint64_t>();
    return a;
}

} // namespace mapping_json

inline nlohmann::json to_json(const mapping::MapConfig& c) {
    return {{"g0_s", c.g0},
            {"sigma_rel", c.sigma_rel},
            {"clip_floor_s", c.clip_floor},
            {"dac_bits", c.dac_bits},
            {"adc_bits", c.adc_bits},
            {"adc_full_scale", c.adc_full_scale}};
}

inline nlohmann::json to_json(const analog::CircuitConfig& c) {
    return {{"engine", c.engine == analog::Engine::ideal ? "ideal" : "network"},
            {"r_seg_ohm", c.r_seg},
            {"driver_side", c.driver_side == analog::Side::near ? "near" : "far"},
            {"sense_side", c.sense_side == analog::Side::near ? "near" : "far"},
            {"solver_tol", c.solver_tol}};
}

inline nlohmann::json to_json(const solver::SolveOptions& o) {
    return {{"map", to_json(o.map)},
            {"circuit", to_json(o.circuit)},
            {"depth", o.plan.depth},
            {"array_max", o.plan.array_max},
            {"normalization",
             o.norm == solver::NormMode::per_array ? "per_array" : "global"},
            {"seed", o.seed},
            {"split", o.split}};
}

/// Full solve report, including every intermediate and seed needed for
/// exact replay.
inline nlohmann::json to_json(const solver::SolveReport& r,
                              const solver::SolveOptions* opts = nullptr) {
    nlohmann::json inter = nlohmann::json::object();
    for (const auto& [name, vec] : r.intermediates) inter[name] = to_json(vec);
    nlohmann::json arrays = nlohmann::json::array();
    for (const auto& a : r.arrays)
        arrays.push_back({{"name", a.name},
                          {"rows", a.rows},
                          {"cols", a.cols},
                          {"scale", a.scale},
                          {"seed", a.seed}});
    nlohmann::json j{{"solver", r.solver},
                     {"depth", r.depth},
                     {"k", r.k},
                     {"seed", r.seed},
                     {"x_hat", to_json(r.x_hat)},
                     {"intermediates", std::move(inter)},
                     {"arrays", std::move(arrays)}};
    if (r.schur.size() > 0) j["schur"] = to_json(r.schur);
    if (std::isfinite(r.relative_error)) j["relative_error"] = r.relative_error;
    if (opts) j["config"] = to_json(*opts);
    return j;
}

inline nlohmann::json to_json(const cost::CostReport& r) {
    auto breakdown = [](const cost::Breakdown& b) {
        return nlohmann::json{{"opa", b.opa},
                              {"dac", b.dac},
                              {"adc", b.adc},
                              {"cells", b.cells},
                              {"total", b.total()}};
    };
    return {{"solver", cost::variant_name(r.kind)},
            {"n", r.n},
            {"counts",
             {{"opa", r.counts.opa},
              {"dac", r.counts.dac},
              {"adc", r.counts.adc},
              {"cells", r.counts.cells}}},
            {"area_mm2", breakdown(r.area)},
            {"power_w", breakdown(r.power)},
            {"latency_cycles", r.latency_cycles},
            {"initiation_interval", r.initiation_interval}};
}

} // namespace blockamc
