// Copyright 2026 The Restless Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "restless/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace restless {

namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 160.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string &text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void finish() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

} // namespace

std::string render_svg(const SvgPlot &plot) {
    auto tx = [&](double x) { return plot.log_x && x > 0.0 ? std::log10(x) : x; };

    Range xr;
    Range yr;
    for (const auto &s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (plot.log_x && !(s.x[i] > 0.0)) {
                continue;
            }
            xr.add(tx(s.x[i]));
            const double b = i < s.band.size() ? s.band[i] : 0.0;
            yr.add(s.y[i] - b);
            yr.add(s.y[i] + b);
        }
    }
    for (const auto &r : plot.reference_lines) {
        yr.add(r.y);
    }
    xr.finish();
    yr.finish();

    const double w = plot.width;
    const double h = plot.height;
    const double pw = w - kMarginLeft - kMarginRight;
    const double ph = h - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (tx(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << plot.width
        << "\" height=\"" << plot.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << plot.width << "\" height=\"" << plot.height
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(plot.title) << "</text>\n";

    // Axes and ticks.
    svg << "<rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop) << "\" width=\""
        << fmt(pw) << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    constexpr int kTicks = 5;
    for (int t = 0; t <= kTicks; ++t) {
        const double fx = xr.lo + (xr.hi - xr.lo) * t / kTicks;
        const double sx = kMarginLeft + pw * t / kTicks;
        svg << "<line x1=\"" << fmt(sx) << "\" y1=\"" << fmt(kMarginTop + ph) << "\" x2=\""
            << fmt(sx) << "\" y2=\"" << fmt(kMarginTop + ph + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(sx) << "\" y=\"" << fmt(kMarginTop + ph + 18)
            << "\" text-anchor=\"middle\">" << tick_label(plot.log_x ? std::pow(10.0, fx) : fx)
            << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * t / kTicks;
        const double sy = kMarginTop + ph - ph * t / kTicks;
        svg << "<line x1=\"" << fmt(kMarginLeft - 5) << "\" y1=\"" << fmt(sy) << "\" x2=\""
            << fmt(kMarginLeft) << "\" y2=\"" << fmt(sy) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(sy + 4)
            << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(kMarginLeft + pw / 2) << "\" y=\"" << fmt(h - 12)
        << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << fmt(kMarginTop + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << fmt(kMarginTop + ph / 2)
        << ")\">" << escape(plot.y_label) << "</text>\n";

    for (const auto &r : plot.reference_lines) {
        svg << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(py(r.y)) << "\" x2=\""
            << fmt(kMarginLeft + pw) << "\" y2=\"" << fmt(py(r.y))
            << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n"
            << "<text x=\"" << fmt(kMarginLeft + pw + 6) << "\" y=\"" << fmt(py(r.y) + 4)
            << "\" fill=\"gray\">" << escape(r.label) << "</text>\n";
    }

    double legend_y = kMarginTop + 10;
    for (const auto &s : plot.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        auto usable = [&](std::size_t i) {
            return std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && (!plot.log_x || s.x[i] > 0.0);
        };
        if (!s.band.empty()) {
            std::ostringstream upper;
            std::ostringstream lower;
            for (std::size_t i = 0; i < n && i < s.band.size(); ++i) {
                if (!usable(i)) {
                    continue;
                }
                upper << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i] + s.band[i])) << ' ';
            }
            for (std::size_t i = std::min(n, s.band.size()); i-- > 0;) {
                if (!usable(i)) {
                    continue;
                }
                lower << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i] - s.band[i])) << ' ';
            }
            svg << "<polygon points=\"" << upper.str() << lower.str() << "\" fill=\"" << s.color
                << "\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
        }
        if (s.style == SvgSeries::Style::Line) {
            svg << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t i = 0; i < n; ++i) {
                if (usable(i)) {
                    svg << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
                }
            }
            svg << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                if (usable(i)) {
                    svg << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
                        << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
                }
            }
        }
        svg << "<rect x=\"" << fmt(kMarginLeft + pw + 6) << "\" y=\"" << fmt(legend_y - 8)
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n"
            << "<text x=\"" << fmt(kMarginLeft + pw + 20) << "\" y=\"" << fmt(legend_y + 1)
            << "\">" << escape(s.label) << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace restless
