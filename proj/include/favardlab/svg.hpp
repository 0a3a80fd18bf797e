#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "favardlab/estimators.hpp"

namespace favardlab {

namespace detail {

inline std::string svg_num(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.4f", v);
    return std::string(buf.data());
}

inline std::string svg_label(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.3g", v);
    return std::string(buf.data());
}

}  // namespace detail

// Log-log plot of the level means with stderr bars and the fitted C/k line.
// Two polylines: the data series and the fit. Deterministic text output.
inline std::string render_curve_svg(const std::vector<EstimateRecord>& records, double fit_C) {
    if (records.empty()) throw input_error("nothing to plot");
    for (const EstimateRecord& r : records) {
        if (!(r.mean > 0.0) || r.k < 1) throw input_error("plot requires positive means and k >= 1");
    }

    const double width = 720, height = 520;
    const double ml = 70, mr = 24, mt = 24, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::log10(static_cast<double>(records.front().k));
    double xmax = std::log10(static_cast<double>(records.back().k));
    if (xmax - xmin < 1e-9) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    double ymin = 1e300, ymax = -1e300;
    auto widen = [&](double v) {
        if (v > 0.0) {
            ymin = std::min(ymin, std::log10(v));
            ymax = std::max(ymax, std::log10(v));
        }
    };
    for (const EstimateRecord& r : records) {
        widen(r.mean);
        widen(r.mean + r.stderr_);
        widen(std::max(r.mean - r.stderr_, r.mean * 0.1));
        widen(fit_C / r.k);
    }
    const double pad = 0.05 * std::max(1e-6, ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto X = [&](double k) { return ml + (std::log10(k) - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double v) { return mt + (ymax - std::log10(v)) / (ymax - ymin) * ph; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) +
         "\" height=\"" + detail::svg_num(height) + "\" viewBox=\"0 0 " + detail::svg_num(width) +
         " " + detail::svg_num(height) + "\">\n";
    s += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
         detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks at integer levels
    for (const EstimateRecord& r : records) {
        const double x = X(r.k);
        s += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(mt + ph) +
             "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(mt + ph + 6) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(mt + ph + 20) +
             "\" font-size=\"12\" text-anchor=\"middle\">" + std::to_string(r.k) + "</text>\n";
    }
    // y ticks, evenly spaced in log space
    const int yticks = 5;
    for (int i = 0; i <= yticks; ++i) {
        const double ly = ymin + (ymax - ymin) * i / yticks;
        const double y = mt + (ymax - ly) / (ymax - ymin) * ph;
        s += "<line x1=\"" + detail::svg_num(ml - 6) + "\" y1=\"" + detail::svg_num(y) +
             "\" x2=\"" + detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(y) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(ml - 10) + "\" y=\"" + detail::svg_num(y + 4) +
             "\" font-size=\"12\" text-anchor=\"end\">" + detail::svg_label(std::pow(10.0, ly)) +
             "</text>\n";
    }
    s += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" + detail::svg_num(height - 12) +
         "\" font-size=\"13\" text-anchor=\"middle\">level k</text>\n";
    s += "<text x=\"16\" y=\"" + detail::svg_num(mt + ph / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         detail::svg_num(mt + ph / 2) + ")\">mean projection length</text>\n";

    // stderr bars
    for (const EstimateRecord& r : records) {
        if (r.stderr_ <= 0.0) continue;
        const double x = X(r.k);
        const double lo = std::max(r.mean - r.stderr_, r.mean * 0.1);
        s += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(Y(lo)) +
             "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(Y(r.mean + r.stderr_)) +
             "\" stroke=\"steelblue\"/>\n";
    }

    auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* color) {
        std::string p = "<polyline fill=\"none\" stroke=\"";
        p += color;
        p += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) p += ' ';
            p += detail::svg_num(pts[i].first) + "," + detail::svg_num(pts[i].second);
        }
        p += "\"/>\n";
        return p;
    };

    std::vector<std::pair<double, double>> data_pts, fit_pts;
    for (const EstimateRecord& r : records) {
        data_pts.emplace_back(X(r.k), Y(r.mean));
        fit_pts.emplace_back(X(r.k), Y(fit_C / r.k));
    }
    s += polyline(data_pts, "steelblue");
    s += polyline(fit_pts, "firebrick");

    s += "<text x=\"" + detail::svg_num(ml + 12) + "\" y=\"" + detail::svg_num(mt + 18) +
         "\" font-size=\"12\" fill=\"steelblue\">mean E_k</text>\n";
    s += "<text x=\"" + detail::svg_num(ml + 12) + "\" y=\"" + detail::svg_num(mt + 34) +
         "\" font-size=\"12\" fill=\"firebrick\">fit C/k, C=" + detail::svg_label(fit_C) +
         "</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace favardlab
