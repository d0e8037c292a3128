#pragma once

// Deterministic file emission: CSV tables, minimal self-contained SVG line
// plots, and shared number formatting.  Everything routed through here so
// identical results serialize to byte-identical files — no timestamps, no
// locale dependence, fixed float formatting.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "sqa/errors.hpp"

namespace sqa {

// Shortest representation that round-trips a double exactly.
inline std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    // Trim to the shortest round-tripping form for readability.
    for (int precision = 1; precision < 17; ++precision) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
        if (std::strtod(shorter, nullptr) == value) return shorter;
    }
    return buffer;
}

// Compact fixed-point form for file names and labels (no exponents).
inline std::string format_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw ConfigError("failed writing: " + path.string());
}

// A nonempty preamble is written as leading #-comment lines (provenance:
// config hash and seed).
inline void write_csv(const std::filesystem::path& path, const Table& table,
                      const std::string& preamble = "") {
    std::string content;
    if (!preamble.empty()) content += "# " + preamble + "\n";
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) content += ',';
        content += table.header[i];
    }
    content += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw ConfigError("csv row width does not match the header: " + path.string());
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) content += ',';
            content += row[i];
        }
        content += '\n';
    }
    write_text_file(path, content);
}

// ---------------------------------------------------------------------------
// Minimal SVG line plots.  The CSV next to the plot is the source of truth;
// these exist so a run can be eyeballed without extra tooling.

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

struct LinePlot {
    std::string title, x_label, y_label;
    std::vector<PlotSeries> series;
    bool log_y = false;
};

namespace detail {

inline const char* plot_color(std::size_t index) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[index % (sizeof(palette) / sizeof(palette[0]))];
}

inline std::string svg_escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline void write_svg_plot(const std::filesystem::path& path, const LinePlot& plot,
                           const std::string& preamble = "") {
    const double width = 640, height = 420;
    const double ml = 64, mr = 16, mt = 32, mb = 48;  // margins
    const double pw = width - ml - mr, ph = height - mt - mb;

    // Data ranges over finite points only.
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool seen = false;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            double y = s.y[i];
            if (plot.log_y) {
                if (!(y > 0.0)) continue;
                y = std::log10(y);
            }
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            if (!seen) {
                x_min = x_max = s.x[i];
                y_min = y_max = y;
                seen = true;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    const auto to_px = [&](double x, double y) {
        if (plot.log_y) y = std::log10(y);
        const double px = ml + (x - x_min) / (x_max - x_min) * pw;
        const double py = mt + (1.0 - (y - y_min) / (y_max - y_min)) * ph;
        return std::pair<double, double>{px, py};
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_label(width) +
           "\" height=\"" + format_label(height) + "\" viewBox=\"0 0 " + format_label(width) +
           " " + format_label(height) + "\">\n";
    if (!preamble.empty()) svg += "<!-- " + detail::svg_escape(preamble) + " -->\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_label(width / 2) + "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">" + detail::svg_escape(plot.title) +
           "</text>\n";

    // Axes box and ticks.
    svg += "<rect x=\"" + format_label(ml) + "\" y=\"" + format_label(mt) + "\" width=\"" +
           format_label(pw) + "\" height=\"" + format_label(ph) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / ticks;
        const double px = ml + pw * i / ticks;
        svg += "<line x1=\"" + format_label(px) + "\" y1=\"" + format_label(mt + ph) +
               "\" x2=\"" + format_label(px) + "\" y2=\"" + format_label(mt + ph + 4) +
               "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + format_label(px) + "\" y=\"" + format_label(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               format_label(fx) + "</text>\n";
        const double fy_lin = y_min + (y_max - y_min) * i / ticks;
        const double fy = plot.log_y ? std::pow(10.0, fy_lin) : fy_lin;
        const double py = mt + ph * (1.0 - static_cast<double>(i) / ticks);
        svg += "<line x1=\"" + format_label(ml - 4) + "\" y1=\"" + format_label(py) +
               "\" x2=\"" + format_label(ml) + "\" y2=\"" + format_label(py) +
               "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + format_label(ml - 8) + "\" y=\"" + format_label(py + 3) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
               (plot.log_y ? ("1e" + format_label(std::round(fy_lin * 100) / 100))
                           : format_label(fy)) +
               "</text>\n";
    }
    svg += "<text x=\"" + format_label(ml + pw / 2) + "\" y=\"" + format_label(height - 8) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::svg_escape(plot.x_label) + "</text>\n";
    svg += "<text x=\"14\" y=\"" + format_label(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 14 " + format_label(mt + ph / 2) + ")\">" +
           detail::svg_escape(plot.y_label) + "</text>\n";

    // Series polylines and legend.
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const auto& series = plot.series[s];
        std::string points;
        for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
            const double y = series.y[i];
            if (!std::isfinite(series.x[i]) || !std::isfinite(y)) continue;
            if (plot.log_y && !(y > 0.0)) continue;
            const auto [px, py] = to_px(series.x[i], y);
            if (!points.empty()) points += ' ';
            points += format_label(std::round(px * 100) / 100) + "," +
                      format_label(std::round(py * 100) / 100);
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(detail::plot_color(s)) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        const double ly = mt + 14 + 16 * static_cast<double>(s);
        svg += "<line x1=\"" + format_label(ml + pw - 120) + "\" y1=\"" + format_label(ly) +
               "\" x2=\"" + format_label(ml + pw - 100) + "\" y2=\"" + format_label(ly) +
               "\" stroke=\"" + detail::plot_color(s) + "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + format_label(ml + pw - 94) + "\" y=\"" + format_label(ly + 3) +
               "\" font-family=\"sans-serif\" font-size=\"10\">" +
               detail::svg_escape(series.name) + "</text>\n";
    }
    svg += "</svg>\n";
    write_text_file(path, svg);
}

}  // namespace sqa
