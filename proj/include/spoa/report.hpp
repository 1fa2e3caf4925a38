#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spoa/bounds.hpp"
#include "spoa/game_json.hpp"
#include "spoa/games.hpp"
#include "spoa/rational.hpp"
#include "spoa/worstcase.hpp"

namespace spoa {

/// Exact values are reported in two forms: the canonical fraction and a
/// 12-significant-digit decimal approximation.
inline Json rational_json(const Rational& r) {
    return Json{{"fraction", fraction_string(r)}, {"decimal", decimal_string(r)}};
}

inline std::string curve_csv(const CurveTable& table) {
    std::ostringstream out;
    out << "k,spoa,design_spoa\n";
    for (const auto& row : table.rows) {
        out << row.k << ',' << fraction_string(row.spoa) << ',';
        if (row.design_spoa) out << fraction_string(*row.design_spoa);
        out << '\n';
    }
    return out.str();
}

inline Json curve_json(const CurveTable& table) {
    Json doc;
    doc["n"] = table.n;
    if (!table.welfare_desc.empty()) doc["welfare"] = table.welfare_desc;
    doc["rows"] = Json::array();
    for (const auto& row : table.rows) {
        Json r;
        r["k"] = row.k;
        r["spoa"] = rational_json(row.spoa);
        if (row.design_spoa) r["design_spoa"] = rational_json(*row.design_spoa);
        doc["rows"].push_back(std::move(r));
    }
    return doc;
}

/// Minimal static line chart: axes, per-mode polyline, legend. The solid
/// line is the welfare-sharing bound, the dashed line the design upper
/// bound.
inline std::string curve_svg(const CurveTable& table) {
    const double width = 640, height = 420;
    const double left = 64, right = 24, top = 24, bottom = 48;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    int k_min = table.rows.front().k, k_max = table.rows.back().k;
    auto x_of = [&](double k) {
        if (k_max == k_min) return left + plot_w / 2;
        return left + (k - k_min) / (k_max - k_min) * plot_w;
    };
    auto y_of = [&](double v) { return top + (1.0 - v) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // gridlines and axis labels
    for (double v = 0.0; v <= 1.001; v += 0.25) {
        double y = y_of(v);
        svg << "  <line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        svg << "  <text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">" << v << "</text>\n";
    }
    int k_step = std::max(1, (k_max - k_min) / 10);
    for (int k = k_min; k <= k_max; k += k_step) {
        double x = x_of(k);
        svg << "  <line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
            << top + plot_h + 4 << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << x << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\">" << k << "</text>\n";
    }
    svg << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">coalition size k</text>\n";
    svg << "  <text x=\"16\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + plot_h / 2
        << ")\">k-strong price of anarchy</text>\n";

    auto polyline = [&](bool design) {
        std::ostringstream pts;
        for (const auto& row : table.rows) {
            if (design && !row.design_spoa) continue;
            const Rational& v = design ? *row.design_spoa : row.spoa;
            pts << x_of(row.k) << "," << y_of(to_double(v)) << " ";
        }
        return pts.str();
    };
    svg << "  <polyline fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"2\" points=\""
        << polyline(false) << "\"/>\n";
    const bool has_design =
        std::any_of(table.rows.begin(), table.rows.end(),
                    [](const CurveRow& r) { return r.design_spoa.has_value(); });
    if (has_design)
        svg << "  <polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" "
               "stroke-dasharray=\"6 4\" points=\""
            << polyline(true) << "\"/>\n";

    double ly = top + plot_h - 16;
    svg << "  <line x1=\"" << left + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + 44 << "\" y2=\""
        << ly << "\" stroke=\"#2e8b57\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << left + 50 << "\" y=\"" << ly + 4 << "\">welfare sharing</text>\n";
    if (has_design) {
        ly += 18;
        svg << "  <line x1=\"" << left + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + 44
            << "\" y2=\"" << ly
            << "\" stroke=\"#c0392b\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
        svg << "  <text x=\"" << left + 50 << "\" y=\"" << ly + 4
            << "\">optimal design (upper bound)</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline Json bound_report_json(const BoundReport& report) {
    Json doc;
    doc["n"] = report.n;
    doc["k"] = report.k;
    doc["mode"] = report.mode == BoundMode::WelfareSharing ? "welfare-sharing" : "optimal-design";
    doc["program_value"] = rational_json(report.primal_value);
    doc["spoa"] = rational_json(report.spoa);
    doc["upper_bound_only"] = report.upper_bound_only;
    if (report.theta) {
        Json support = Json::array();
        for (std::size_t i = 0; i < report.theta->entries.size(); ++i) {
            if (sgn(report.theta->entries[i]) == 0) continue;
            const Label& l = report.theta->index_set.labels[i];
            support.push_back(Json{{"e", l.e},
                                   {"x", l.x},
                                   {"o", l.o},
                                   {"value", rational_json(report.theta->entries[i])}});
        }
        doc["theta"] = Json{{"index_set_size", report.theta->index_set.size()},
                            {"support", std::move(support)}};
    }
    if (!report.utility_rules.empty()) {
        Json rules = Json::array();
        for (std::size_t z = 0; z < report.utility_rules.size(); ++z) {
            Json values = Json::array();
            for (const auto& v : report.utility_rules[z].values) values.push_back(fraction_string(v));
            rules.push_back(Json{{"zeta", z + 1}, {"values", std::move(values)}});
        }
        doc["utility_rules"] = std::move(rules);
    }
    return doc;
}

inline Json certificate_json(const TightnessCertificate& cert) {
    Json doc;
    doc["n"] = cert.n;
    doc["k"] = cert.k;
    doc["lp_value"] = rational_json(cert.lp_value);
    doc["constructed_ratio"] = rational_json(cert.constructed_ratio);
    doc["equilibrium_checked"] = cert.equilibrium_checked;
    doc["equilibrium_verified"] = cert.equilibrium_verified;
    doc["resource_count"] = cert.resource_count.get_str();
    return doc;
}

inline Json trace_json(const ResourceGame& g, const DynamicsTrace& trace) {
    Json doc;
    doc["mode"] = trace.mode == DynamicsMode::Deterministic ? "deterministic" : "asynchronous";
    if (trace.seed)
        doc["seed"] = *trace.seed;
    else
        doc["seed"] = nullptr;
    doc["initial"] = trace.initial;
    doc["steps"] = Json::array();
    for (const auto& step : trace.steps)
        doc["steps"].push_back(Json{{"coalition", step.coalition},
                                    {"objective_before", rational_json(step.objective_before)},
                                    {"objective_after", rational_json(step.objective_after)},
                                    {"action", step.action}});
    doc["final"] = trace.final_action;
    doc["final_objective"] = rational_json(objective(g, trace.final_action));
    doc["final_welfare"] = rational_json(welfare(g, trace.final_action));
    return doc;
}

inline Json verdict_json(const ResourceGame& g, const JointAction& a, int k) {
    Json doc;
    doc["k"] = k;
    doc["action"] = a;
    doc["objective"] = rational_json(objective(g, a));
    auto witness = find_improving_deviation(g, a, k);
    doc["is_equilibrium"] = !witness.has_value();
    if (witness) {
        JointAction deviated = a;
        for (std::size_t i = 0; i < witness->coalition.size(); ++i)
            deviated[static_cast<std::size_t>(witness->coalition[i])] = witness->block[i];
        doc["witness"] = Json{{"coalition", witness->coalition},
                              {"block", witness->block},
                              {"objective_after", rational_json(objective(g, deviated))}};
    }
    return doc;
}

} // namespace spoa
