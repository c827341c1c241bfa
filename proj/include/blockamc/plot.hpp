// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "blockamc/bench.hpp"
#include "blockamc/cost.hpp"
#include "blockamc/types.hpp"

// Minimal self-contained SVG charts for the sweep artifacts. CSV/JSON are
// the primary outputs; these renderings are optional and deterministic
// (no timestamps, fixed-precision coordinates).

namespace blockamc::plot {

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b"};
    return palette[i % 6];
}

struct Canvas {
    double width = 720, height = 480;
    double left = 70, right = 20, top = 40, bottom = 55;
    std::string body;

    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body += "<line x1='" + num(x1) + "' y1='" + num(y1) + "' x2='" + num(x2) +
                "' y2='" + num(y2) + "' " + style + "/>\n";
    }
    void text(double x, double y, const std::string& s, const std::string& attrs = "") {
        body += "<text x='" + num(x) + "' y='" + num(y) +
                "' font-family='sans-serif' font-size='12' " + attrs + ">" + s +
                "</text>\n";
    }
    void circle(double x, double y, double r, const std::string& fill) {
        body += "<circle cx='" + num(x) + "' cy='" + num(y) + "' r='" + num(r) +
                "' fill='" + fill + "'/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill) {
        body += "<rect x='" + num(x) + "' y='" + num(y) + "' width='" + num(w) +
                "' height='" + num(h) + "' fill='" + fill + "'/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& stroke) {
        std::string p;
        for (const auto& [x, y] : pts) p += num(x) + "," + num(y) + " ";
        body += "<polyline points='" + p + "' fill='none' stroke='" + stroke +
                "' stroke-width='1.5'/>\n";
    }

    std::string render(const std::string& title) const {
        std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" +
                          num(width) + "' height='" + num(height) + "'>\n";
        svg += "<rect width='100%' height='100%' fill='white'/>\n";
        svg += "<text x='" + num(width / 2) +
               "' y='22' text-anchor='middle' font-family='sans-serif' "
               "font-size='15'>" + title + "</text>\n";
        svg += body;
        svg += "</svg>\n";
        return svg;
    }
};

} // namespace detail

/// Mean relative error vs matrix size, one curve per solver, log-log axes
/// (base 2 on x, base 10 on y).
inline std::string error_vs_size_svg(const std::vector<bench::Aggregate>& aggs,
                                     matgen::Kind kind) {
    using detail::num;
    detail::Canvas c;

    std::vector<std::string> solvers;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& a : aggs) {
        if (a.kind != kind || !(a.mean > 0)) continue;
        if (std::find(solvers.begin(), solvers.end(), a.solver) == solvers.end())
            solvers.push_back(a.solver);
        xmin = std::min(xmin, std::log2(static_cast<double>(a.size)));
        xmax = std::max(xmax, std::log2(static_cast<double>(a.size)));
        ymin = std::min(ymin, std::log10(a.mean));
        ymax = std::max(ymax, std::log10(a.mean));
    }
    if (solvers.empty()) return detail::Canvas{}.render("no data");
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    ymin = std::floor(ymin - 0.2);
    ymax = std::ceil(ymax + 0.2);

    auto px = [&](double lx) { return c.left + (lx - xmin) / (xmax - xmin) * c.plot_w(); };
    auto py = [&](double ly) { return c.top + (ymax - ly) / (ymax - ymin) * c.plot_h(); };

    const std::string axis = "stroke='black' stroke-width='1'";
    c.line(c.left, c.top, c.left, c.top + c.plot_h(), axis);
    c.line(c.left, c.top + c.plot_h(), c.left + c.plot_w(), c.top + c.plot_h(), axis);
    for (double ly = ymin; ly <= ymax + 1e-9; ly += 1.0) {
        c.line(c.left - 4, py(ly), c.left, py(ly), axis);
        char lab[24];
        std::snprintf(lab, sizeof(lab), "1e%d", static_cast<int>(ly));
        c.text(c.left - 8, py(ly) + 4, lab, "text-anchor='end'");
    }
    for (double lx = std::ceil(xmin); lx <= xmax + 1e-9; lx += 1.0) {
        c.line(px(lx), c.top + c.plot_h(), px(lx), c.top + c.plot_h() + 4, axis);
        c.text(px(lx), c.top + c.plot_h() + 18,
               std::to_string(1LL << static_cast<int>(lx)), "text-anchor='middle'");
    }
    c.text(c.left + c.plot_w() / 2, c.height - 14, "matrix size n", "text-anchor='middle'");
    c.text(14, c.top + c.plot_h() / 2, "mean relative error",
           "text-anchor='middle' transform='rotate(-90 14 " +
               num(c.top + c.plot_h() / 2) + ")'");

    for (std::size_t si = 0; si < solvers.size(); ++si) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& a : aggs) {
            if (a.kind != kind || a.solver != solvers[si] || !(a.mean > 0)) continue;
            pts.emplace_back(px(std::log2(static_cast<double>(a.size))),
                             py(std::log10(a.mean)));
        }
        c.polyline(pts, detail::color(si));
        for (const auto& [x, y] : pts) c.circle(x, y, 3, detail::color(si));
        c.rect(c.left + c.plot_w() - 150, c.top + 8 + 18 * static_cast<double>(si),
               10, 10, detail::color(si));
        c.text(c.left + c.plot_w() - 134, c.top + 17 + 18 * static_cast<double>(si),
               solvers[si]);
    }
    return c.render("relative error vs size (" + matgen::kind_name(kind) + ")");
}

/// Element-wise overlay of one reference solution and solver estimates.
inline std::string overlay_svg(
    const Vector& reference,
    const std::vector<std::pair<std::string, Vector>>& estimates,
    const std::string& title) {
    using detail::num;
    detail::Canvas c;
    const Index n = reference.size();
    double ymin = reference.minCoeff(), ymax = reference.maxCoeff();
    for (const auto& [name, v] : estimates) {
        ymin = std::min(ymin, v.minCoeff());
        ymax = std::max(ymax, v.maxCoeff());
    }
    if (ymax - ymin < 1e-12) { ymin -= 1; ymax += 1; }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double i) {
        return c.left + (n > 1 ? i / static_cast<double>(n - 1) : 0.5) * c.plot_w();
    };
    auto py = [&](double v) { return c.top + (ymax - v) / (ymax - ymin) * c.plot_h(); };

    const std::string axis = "stroke='black' stroke-width='1'";
    c.line(c.left, c.top, c.left, c.top + c.plot_h(), axis);
    c.line(c.left, c.top + c.plot_h(), c.left + c.plot_w(), c.top + c.plot_h(), axis);
    c.text(c.left + c.plot_w() / 2, c.height - 14, "element index", "text-anchor='middle'");

    std::vector<std::pair<double, double>> ref_pts;
    for (Index i = 0; i < n; ++i)
        ref_pts.emplace_back(px(static_cast<double>(i)), py(reference(i)));
    c.polyline(ref_pts, "#444444");
    c.text(c.left + 8, c.top + 14, "reference (line)");

    for (std::size_t si = 0; si < estimates.size(); ++si) {
        const auto& [name, v] = estimates[si];
        for (Index i = 0; i < v.size(); ++i)
            c.circle(px(static_cast<double>(i)), py(v(i)), 2.2, detail::color(si));
        c.rect(c.left + 8, c.top + 22 + 16 * static_cast<double>(si), 9, 9,
               detail::color(si));
        c.text(c.left + 22, c.top + 30 + 16 * static_cast<double>(si), name);
    }
    return c.render(title);
}

/// Stacked component bars (OPA, DAC, ADC, cells), one pair of charts'
/// worth of data per call: pass what to stack (area or power).
inline std::string cost_breakdown_svg(const std::vector<cost::CostReport>& reports,
                                      bool area, const std::string& title) {
    using detail::num;
    detail::Canvas c;
    double vmax = 0;
    for (const auto& r : reports)
        vmax = std::max(vmax, area ? r.area.total() : r.power.total());
    if (!(vmax > 0)) vmax = 1;

    const std::string axis = "stroke='black' stroke-width='1'";
    c.line(c.left, c.top, c.left, c.top + c.plot_h(), axis);
    c.line(c.left, c.top + c.plot_h(), c.left + c.plot_w(), c.top + c.plot_h(), axis);
    c.text(14, c.top + c.plot_h() / 2, area ? "area [mm2]" : "power [W]",
           "text-anchor='middle' transform='rotate(-90 14 " +
               num(c.top + c.plot_h() / 2) + ")'");

    const char* comp_names[4] = {"opa", "dac", "adc", "cells"};
    const double bar_w = c.plot_w() / (2.0 * static_cast<double>(reports.size()) + 1.0);
    for (std::size_t bi = 0; bi < reports.size(); ++bi) {
        const auto& r = reports[bi];
        const auto& b = area ? r.area : r.power;
        const double parts[4] = {b.opa, b.dac, b.adc, b.cells};
        const double x = c.left + bar_w * (1.0 + 2.0 * static_cast<double>(bi));
        double y = c.top + c.plot_h();
        for (int p = 0; p < 4; ++p) {
            const double h = parts[p] / vmax * c.plot_h();
            y -= h;
            c.rect(x, y, bar_w, h, detail::color(static_cast<std::size_t>(p)));
        }
        char total[32];
        std::snprintf(total, sizeof(total), "%.4g", b.total());
        c.text(x + bar_w / 2, y - 6, total, "text-anchor='middle'");
        c.text(x + bar_w / 2, c.top + c.plot_h() + 18, cost::variant_name(r.kind),
               "text-anchor='middle'");
    }
    for (int p = 0; p < 4; ++p) {
        c.rect(c.left + c.plot_w() - 90, c.top + 8 + 16 * p, 9, 9,
               detail::color(static_cast<std::size_t>(p)));
        c.text(c.left + c.plot_w() - 76, c.top + 16 + 16 * p, comp_names[p]);
    }
    return c.render(title);
}

} // namespace blockamc::plot
