// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockamc/io.hpp"
#include "blockamc/types.hpp"

namespace blockamc::cost {

enum class Variant { original, one_stage, two_stage };

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::original: return "original";
        case Variant::one_stage: return "one_stage";
        case Variant::two_stage: return "two_stage";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& s) {
    if (s == "original") return Variant::original;
    if (s == "one_stage") return Variant::one_stage;
    if (s == "two_stage") return Variant::two_stage;
    throw ConfigError("unknown solver variant: '" + s + "'");
}

/// Per-unit calibration values, loaded from a config file. The OPA power
/// model is P = N * V_s * I_q; everything else is linear in component
/// counts.
struct CostConfig {
    double opa_area_mm2 = 0.0;
    double opa_vs_v = 0.0;
    double opa_iq_a = 0.0;
    double dac_area_mm2 = 0.0;
    double dac_power_w = 0.0;
    double adc_area_mm2 = 0.0;
    double adc_power_w = 0.0;
    double cell_area_mm2 = 0.0;
    double cell_power_w = 0.0;
};

inline void validate(const CostConfig& c) {
    const double vals[] = {c.opa_area_mm2, c.opa_vs_v,      c.opa_iq_a,
                           c.dac_area_mm2, c.dac_power_w,   c.adc_area_mm2,
                           c.adc_power_w,  c.cell_area_mm2, c.cell_power_w};
    for (double v : vals)
        if (v < 0) throw ConfigError("cost config values must be >= 0");
}

inline CostConfig cost_config_from_json(const nlohmann::json& j) {
    CostConfig c;
    c.opa_area_mm2 = j.at("opa_area_mm2").get<double>();
    c.opa_vs_v = j.at("opa_vs_v").get<double>();
    c.opa_iq_a = j.at("opa_iq_a").get<double>();
    c.dac_area_mm2 = j.at("dac_area_mm2").get<double>();
    c.dac_power_w = j.at("dac_power_w").get<double>();
    c.adc_area_mm2 = j.at("adc_area_mm2").get<double>();
    c.adc_power_w = j.at("adc_power_w").get<double>();
    c.cell_area_mm2 = j.at("cell_area_mm2").get<double>();
    c.cell_power_w = j.at("cell_power_w").get<double>();
    validate(c);
    return c;
}

inline CostConfig load_cost_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path), nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad cost config '" + path + "': " + e.what());
    }
    try {
        return cost_config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad cost config '" + path + "': " + e.what());
    }
}

struct Counts {
    long long opa = 0;
    long long dac = 0;
    long long adc = 0;
    long long cells = 0;
};

/// Peripheral and cell counts per solver variant for an n x n system.
/// The cascade shares one set of OPAs/converters sized to the widest
/// step, so the one-stage macro halves the OPA count; the two-stage
/// solver deploys OPAs separately for first-stage INV and MVM, matching
/// the original count again. Cells always total 2*n^2 (a signed pair for
/// every matrix element, regardless of partitioning).
inline Counts component_counts(Variant v, Index n, Index k = 0) {
    if (n < 2) throw ConfigError("component_counts: n must be >= 2");
    if (k == 0) k = (n + 1) / 2;
    if (k < 1 || k > n - 1) throw ConfigError("component_counts: k out of range");
    const long long wide = static_cast<long long>(std::max(k, n - k));
    const long long cells = 2 * static_cast<long long>(n) * static_cast<long long>(n);
    switch (v) {
        case Variant::original: return {n, n, n, cells};
        case Variant::one_stage: return {wide, wide, wide, cells};
        case Variant::two_stage: return {n, wide, wide, cells};
    }
    throw ConfigError("unknown variant");
}

struct Breakdown {
    double opa = 0.0;
    double dac = 0.0;
    double adc = 0.0;
    double cells = 0.0;
    double total() const { return opa + dac + adc + cells; }
};

inline Breakdown estimate_area(const Counts& n, const CostConfig& c) {
    validate(c);
    return {static_cast<double>(n.opa) * c.opa_area_mm2,
            static_cast<double>(n.dac) * c.dac_area_mm2,
            static_cast<double>(n.adc) * c.adc_area_mm2,
            static_cast<double>(n.cells) * c.cell_area_mm2};
}

/// OPA term is exactly N * V_s * I_q; converter and cell terms are linear
/// in counts.
inline Breakdown estimate_power(const Counts& n, const CostConfig& c) {
    validate(c);
    return {static_cast<double>(n.opa) * c.opa_vs_v * c.opa_iq_a,
            static_cast<double>(n.dac) * c.dac_power_w,
            static_cast<double>(n.adc) * c.adc_power_w,
            static_cast<double>(n.cells) * c.cell_power_w};
}

/// Behavioral cycle count: one MVM or INV per clock cycle. Depth 0 solves
/// in one step; each deeper stage expands its three INV operations into
/// full sub-solves and its two MVMs into their tile schedules.
inline long long latency_cycles_depth(int depth, Index n, Index array_max = 0) {
    if (depth <= 0) return 1;
    const Index m = (n + 1) / 2;
    long long mvm_cycles = 1;
    if (depth >= 2) {
        Index tile = array_max > 0 ? array_max : (m + 1) / 2;
        const long long per_side = (m + tile - 1) / tile;
        mvm_cycles = per_side * per_side;
    }
    return 3 * latency_cycles_depth(depth - 1, m, array_max) + 2 * mvm_cycles;
}

inline long long latency_cycles(Variant v, Index n = 0, Index array_max = 0) {
    switch (v) {
        case Variant::original: return 1;
        case Variant::one_stage: return 5;
        case Variant::two_stage: return latency_cycles_depth(2, n, array_max);
    }
    throw ConfigError("unknown variant");
}

/// First-order pipelining: two S&H banks let the cascade accept a new
/// problem every five cycles.
inline long long initiation_interval(Variant v) {
    return v == Variant::original ? 1 : 5;
}

struct CostReport {
    Variant kind = Variant::original;
    Index n = 0;
    Counts counts;
    Breakdown area;   ///< mm^2
    Breakdown power;  ///< W
    long long latency_cycles = 0;
    long long initiation_interval = 0;
};

inline CostReport make_cost_report(Variant v, Index n, const CostConfig& cfg,
                                   Index array_max = 0, Index k = 0) {
    CostReport r;
    r.kind = v;
    r.n = n;
    r.counts = component_counts(v, n, k);
    r.area = estimate_area(r.counts, cfg);
    r.power = estimate_power(r.counts, cfg);
    r.latency_cycles = latency_cycles(v, n, array_max);
    r.initiation_interval = initiation_interval(v);
    return r;
}

/// CSV with the four-part component split (OPA, DAC, ADC, RRAM cells) per
/// solver, one component per line, plus a total line.
inline std::string cost_reports_csv(const std::vector<CostReport>& reports) {
    std::string out = "solver,component,count,area_mm2,power_w\n";
    for (const auto& r : reports) {
        const std::string s = variant_name(r.kind);
        auto row = [&](const std::string& comp, long long cnt, double a, double p) {
            out += s + ',' + comp + ',' + std::to_string(cnt) + ',' +
                   format_double(a) + ',' + format_double(p) + '\n';
        };
        row("opa", r.counts.opa, r.area.opa, r.power.opa);
        row("dac", r.counts.dac, r.area.dac, r.power.dac);
        row("adc", r.counts.adc, r.area.adc, r.power.adc);
        row("cells", r.counts.cells, r.area.cells, r.power.cells);
        row("total", 0, r.area.total(), r.power.total());
    }
    return out;
}

} // namespace blockamc::cost
