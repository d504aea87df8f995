#pragma once

// File emitters: CSV series/scan data and a dependency-free SVG line plot.
// Both are byte-deterministic functions of their inputs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwalk/series.hpp"

namespace spinwalk {

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 12 significant digits, trailing zeros kept ("%#.12g"), enough to verify
/// 1e-10 tolerances from the file alone.
inline std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%#.12g", v);
    return buf;
}

inline std::string series_csv(const EntropySeries& s) {
    std::string out = "tau,entropy\n";
    for (std::size_t tau = 0; tau < s.values.size(); ++tau)
        out += std::to_string(tau) + "," + format_sig12(s.values[tau]) + "\n";
    return out;
}

inline std::string scan_csv(const std::map<double, std::optional<int>>& scan) {
    std::string out = "T,first_drop_tau\n";
    for (const auto& [T, drop] : scan) {
        out += format_sig12(T) + ",";
        out += drop.has_value() ? std::to_string(*drop) : std::string("none");
        out += "\n";
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open " + path + " for writing");
    file << content;
    file.flush();
    if (!file) throw IoFailure("write to " + path + " failed");
}

inline void write_series_csv(const EntropySeries& s, const std::string& path) {
    write_text_file(path, series_csv(s));
}

inline void write_scan_csv(const std::map<double, std::optional<int>>& scan,
                           const std::string& path) {
    write_text_file(path, scan_csv(scan));
}

/// Parses a file produced by write_series_csv back into entropy values.
inline std::vector<double> read_series_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoFailure("cannot open " + path);
    std::string line;
    if (!std::getline(file, line) || line != "tau,entropy")
        throw IoFailure(path + " is not an entropy series file");
    std::vector<double> values;
    while (std::getline(file, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoFailure(path + ": malformed row '" + line + "'");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return values;
}

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmtg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Tick spacing of roughly range/target rounded to 1, 2 or 5 times a power
/// of ten.
inline double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.0) return mag;
    if (frac <= 2.0) return 2.0 * mag;
    if (frac <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

}  // namespace detail

/// Renders one polyline per series on shared axes, with tick labels and a
/// legend built from each run's metadata.
inline std::string series_svg(const std::vector<EntropySeries>& set) {
    std::size_t points = 0;
    for (const auto& s : set) points += s.values.size();
    if (set.empty() || points == 0)
        throw std::invalid_argument("series_svg needs at least one nonempty series");

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    constexpr int kPaletteSize = 8;
    constexpr double kLeft = 70, kRight = 640, kTop = 40, kBottom = 500;

    double xmax = 1.0, ymax = 0.0;
    for (const auto& s : set) {
        xmax = std::max(xmax, static_cast<double>(s.values.size() - 1));
        for (double v : s.values) ymax = std::max(ymax, v);
    }
    ymax = ymax > 0.0 ? 1.05 * ymax : 1.0;
    auto px = [&](double tau) { return kLeft + (kRight - kLeft) * tau / xmax; };
    auto py = [&](double v) { return kBottom - (kBottom - kTop) * v / ymax; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"560\" "
           "viewBox=\"0 0 880 560\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"880\" height=\"560\" fill=\"white\"/>\n";

    const double xstep = std::max(1.0, std::floor(detail::nice_step(xmax, 6)));
    for (double x = 0.0; x <= xmax + 1e-9; x += xstep) {
        const std::string sx = detail::fmt2(px(x));
        svg += "<line x1=\"" + sx + "\" y1=\"" + detail::fmt2(kBottom) + "\" x2=\"" + sx +
               "\" y2=\"" + detail::fmt2(kBottom + 6) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + sx + "\" y=\"" + detail::fmt2(kBottom + 22) +
               "\" font-size=\"13\" text-anchor=\"middle\">" + detail::fmtg(x) + "</text>\n";
    }
    const double ystep = detail::nice_step(ymax, 6);
    for (double y = 0.0; y <= ymax + 1e-9 * ymax; y += ystep) {
        const std::string sy = detail::fmt2(py(y));
        svg += "<line x1=\"" + detail::fmt2(kLeft - 6) + "\" y1=\"" + sy + "\" x2=\"" +
               detail::fmt2(kLeft) + "\" y2=\"" + sy + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::fmt2(kLeft - 10) + "\" y=\"" + detail::fmt2(py(y) + 4) +
               "\" font-size=\"13\" text-anchor=\"end\">" + detail::fmtg(y) + "</text>\n";
        svg += "<line x1=\"" + detail::fmt2(kLeft) + "\" y1=\"" + sy + "\" x2=\"" +
               detail::fmt2(kRight) + "\" y2=\"" + sy +
               "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }
    svg += "<line x1=\"" + detail::fmt2(kLeft) + "\" y1=\"" + detail::fmt2(kBottom) + "\" x2=\"" +
           detail::fmt2(kRight) + "\" y2=\"" + detail::fmt2(kBottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + detail::fmt2(kLeft) + "\" y1=\"" + detail::fmt2(kTop) + "\" x2=\"" +
           detail::fmt2(kLeft) + "\" y2=\"" + detail::fmt2(kBottom) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt2((kLeft + kRight) / 2) + "\" y=\"545\" font-size=\"15\" "
           "text-anchor=\"middle\">step tau</text>\n";
    svg += "<text x=\"18\" y=\"" + detail::fmt2((kTop + kBottom) / 2) +
           "\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           detail::fmt2((kTop + kBottom) / 2) + ")\">entropy [nats]</text>\n";

    for (std::size_t k = 0; k < set.size(); ++k) {
        const auto& s = set[k];
        if (s.values.empty()) continue;
        const char* color = kPalette[k % kPaletteSize];
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t tau = 0; tau < s.values.size(); ++tau) {
            if (tau) svg += " ";
            svg += detail::fmt2(px(static_cast<double>(tau))) + "," + detail::fmt2(py(s.values[tau]));
        }
        svg += "\"/>\n";
        const double ly = 60.0 + 24.0 * static_cast<double>(k);
        svg += "<line x1=\"660\" y1=\"" + detail::fmt2(ly) + "\" x2=\"690\" y2=\"" +
               detail::fmt2(ly) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"696\" y=\"" + detail::fmt2(ly + 4) + "\" font-size=\"13\">" +
               s.meta.label() + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline void render_series_svg(const std::vector<EntropySeries>& set, const std::string& path) {
    write_text_file(path, series_svg(set));
}

}  // namespace spinwalk
