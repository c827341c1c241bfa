// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blockamc/bench.hpp"
#include "blockamc/plot.hpp"

namespace blockamc::bench {

/// Writes the sweep artifacts into out_dir: records.csv (per-record),
/// summary.csv (per-group statistics), manifest.json (config + seeds),
/// and optionally one error-vs-size SVG per matrix kind. Output bytes are
/// a pure function of the records and config.
inline std::vector<std::string> emit(const std::vector<SweepRecord>& records,
                                     const SweepConfig& cfg,
                                     const std::string& out_dir,
                                     bool plots = false) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    const auto aggs = aggregate(records);
    std::vector<std::string> files;
    auto put = [&](const std::string& name, const std::string& text) {
        write_text_file((fs::path(out_dir) / name).string(), text);
        files.push_back(name);
    };

    put("records.csv", records_csv(records));
    put("summary.csv", aggregates_csv(aggs));
    if (plots)
        for (auto kind : cfg.kinds)
            put("error_vs_size_" + matgen::kind_name(kind) + ".svg",
                plot::error_vs_size_svg(aggs, kind));
    put("manifest.json", manifest_json(cfg, files).dump(2) + "\n");
    return files;
}

} // namespace blockamc::bench
