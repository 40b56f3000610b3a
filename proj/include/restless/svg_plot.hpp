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

/**
 * @file
 * Minimal static SVG 1.1 writer: axes, line and scatter series, shaded
 * bands and horizontal reference lines.
 */

#pragma once

#include <string>
#include <vector>

namespace restless {

struct SvgSeries {
    enum class Style { Line, Scatter };

    std::string label;
    Style style = Style::Line;
    std::string color = "#1f77b4";
    std::vector<double> x;
    std::vector<double> y;
    /// Optional shaded band y - band .. y + band; empty for none.
    std::vector<double> band;
};

struct SvgReferenceLine {
    double y = 0.0;
    std::string label;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    std::vector<SvgReferenceLine> reference_lines;
    bool log_x = false;
    int width = 720;
    int height = 440;
};

/// Renders the plot. Non-finite points are skipped.
std::string render_svg(const SvgPlot &plot);

} // namespace restless
