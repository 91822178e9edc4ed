#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "motionsync/detail/text.hpp"
#include "motionsync/dp.hpp"

namespace motionsync {

struct PlotSeries {
    std::string name;
    std::vector<std::array<double, 2>> points;
};

struct PlotDocument {
    std::vector<PlotSeries> series;
    std::string x_label;
    std::string y_label;
};

inline void validate_plot(const PlotDocument& doc, bool unit_square_x) {
    if (doc.series.empty()) throw std::invalid_argument("plot needs at least one series");
    for (const auto& s : doc.series) {
        if (s.points.empty()) throw std::invalid_argument("plot series must be non-empty");
        if (unit_square_x)
            for (const auto& p : s.points)
                if (p[0] < 0.0 || p[0] > 1.0)
                    throw std::invalid_argument("warp plots expect x within [0,1]");
    }
}

/// Long-format CSV: series,x,y.
inline std::string plot_to_csv(const PlotDocument& doc) {
    std::string out = "series,x,y\n";
    for (const auto& s : doc.series)
        for (const auto& p : s.points)
            out += s.name + "," + detail::format_double(p[0]) + "," +
                   detail::format_double(p[1]) + "\n";
    return out;
}

/// Minimal hand-emitted SVG: one polyline per series plus axis labels.
inline std::string plot_to_svg(const PlotDocument& doc) {
    constexpr int width = 640, height = 480, margin = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : doc.series)
        for (const auto& p : s.points) {
            x0 = std::min(x0, p[0]);
            x1 = std::max(x1, p[0]);
            y0 = std::min(y0, p[1]);
            y1 = std::max(y1, p[1]);
        }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;
    const auto map_x = [&](double x) {
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin);
    };
    const auto map_y = [&](double y) {
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin);
    };
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b"};
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::string ax = std::to_string(margin);
    svg += "<line x1=\"" + ax + "\" y1=\"" + std::to_string(height - margin) + "\" x2=\"" +
           std::to_string(width - margin) + "\" y2=\"" + std::to_string(height - margin) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + ax + "\" y1=\"" + std::to_string(margin) + "\" x2=\"" + ax +
           "\" y2=\"" + std::to_string(height - margin) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(height - 12) +
           "\" font-size=\"13\">" + doc.x_label + "</text>\n";
    svg += "<text x=\"14\" y=\"" + std::to_string(height / 2) +
           "\" font-size=\"13\" transform=\"rotate(-90 14 " + std::to_string(height / 2) +
           ")\">" + doc.y_label + "</text>\n";
    for (std::size_t k = 0; k < doc.series.size(); ++k) {
        const auto& s = doc.series[k];
        std::string pts;
        for (const auto& p : s.points)
            pts += detail::format_double(map_x(p[0])) + "," + detail::format_double(map_y(p[1])) + " ";
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(palette[k % 6]) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + std::to_string(width - margin - 150) + "\" y=\"" +
               std::to_string(margin + 16 * int(k)) + "\" font-size=\"12\" fill=\"" +
               palette[k % 6] + "\">" + s.name + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

/// Accumulated-cost heat map as CSV; unreached cells print as inf.
inline std::string landscape_to_csv(const DpLandscape& landscape) {
    std::string out;
    for (int i = 0; i < landscape.rows; ++i) {
        for (int j = 0; j < landscape.cols; ++j) {
            const double v = landscape.accumulated[size_t(i) * size_t(landscape.cols) + size_t(j)];
            if (j) out += ",";
            out += std::isfinite(v) ? detail::format_double(v) : "inf";
        }
        out += "\n";
    }
    return out;
}

}  // namespace motionsync
