#pragma once

#include "altproj/recon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace altproj::plot {

inline constexpr const char* kGeneratorVersion = "altproj-plot 1.0";

namespace detail {

inline std::string fixed(double v, int digits = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

/// Round step for roughly `target` ticks over `span`.
inline double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag)
            return m * mag;
    return 10.0 * mag;
}

} // namespace detail

/// PSNR-vs-iteration line chart. Rows without a finite PSNR are skipped.
inline std::string psnr_profile_svg(const std::vector<TraceRow>& trace, const std::string& title)
{
    std::vector<std::pair<double, double>> pts;
    for (const TraceRow& row : trace)
        if (row.psnr_db && std::isfinite(*row.psnr_db))
            pts.emplace_back(static_cast<double>(row.k), *row.psnr_db);

    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 20, top = 40, bottom = 55;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double xmax = 1.0, ymin = 0.0, ymax = 50.0;
    if (!pts.empty()) {
        xmax = std::max(1.0, pts.back().first);
        auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                            [](const auto& a, const auto& b) { return a.second < b.second; });
        ymin = std::floor(lo->second / 10.0) * 10.0;
        ymax = std::max(ymin + 10.0, std::ceil(hi->second / 10.0) * 10.0);
    }
    auto sx = [&](double x) { return left + pw * x / xmax; };
    auto sy = [&](double y) { return top + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<!-- generator: " + std::string(kGeneratorVersion) + " -->\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + title +
           "</text>\n";

    svg += "<g stroke=\"#ddd\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const double ystep = detail::nice_step(ymax - ymin, 6);
    for (double y = ymin; y <= ymax + 1e-9; y += ystep) {
        svg += "<line x1=\"" + detail::fixed(left) + "\" y1=\"" + detail::fixed(sy(y)) + "\" x2=\"" +
               detail::fixed(left + pw) + "\" y2=\"" + detail::fixed(sy(y)) + "\"/>\n";
        svg += "<text stroke=\"none\" fill=\"black\" x=\"" + detail::fixed(left - 6) + "\" y=\"" +
               detail::fixed(sy(y) + 4) + "\" text-anchor=\"end\">" + detail::fixed(y, 0) + "</text>\n";
    }
    const double xstep = detail::nice_step(xmax, 6);
    for (double x = 0; x <= xmax + 1e-9; x += xstep) {
        svg += "<line x1=\"" + detail::fixed(sx(x)) + "\" y1=\"" + detail::fixed(top) + "\" x2=\"" +
               detail::fixed(sx(x)) + "\" y2=\"" + detail::fixed(top + ph) + "\"/>\n";
        svg += "<text stroke=\"none\" fill=\"black\" x=\"" + detail::fixed(sx(x)) + "\" y=\"" +
               detail::fixed(top + ph + 16) + "\" text-anchor=\"middle\">" + detail::fixed(x, 0) + "</text>\n";
    }
    svg += "</g>\n";

    svg += "<rect x=\"" + detail::fixed(left) + "\" y=\"" + detail::fixed(top) + "\" width=\"" + detail::fixed(pw) +
           "\" height=\"" + detail::fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    if (ymin < 48.0 && 48.0 < ymax)
        svg += "<line x1=\"" + detail::fixed(left) + "\" y1=\"" + detail::fixed(sy(48.0)) + "\" x2=\"" +
               detail::fixed(left + pw) + "\" y2=\"" + detail::fixed(sy(48.0)) +
               "\" stroke=\"#c33\" stroke-dasharray=\"5,4\"/>\n";

    if (!pts.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i)
                svg += ' ';
            svg += detail::fixed(sx(pts[i].first)) + "," + detail::fixed(sy(pts[i].second));
        }
        svg += "\"/>\n";
    }

    svg += "<text x=\"" + detail::fixed(left + pw / 2) +
           "\" y=\"410\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">iteration k</text>\n";
    svg += "<text x=\"18\" y=\"" + detail::fixed(top + ph / 2) + "\" transform=\"rotate(-90 18 " +
           detail::fixed(top + ph / 2) +
           ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">PSNR (dB)</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace altproj::plot
