#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hrlnav::io {

/// Trailing moving average: out[i] = mean(v[max(0, i-window+1) .. i]).
/// The first window-1 entries average over what is available.
std::vector<double> moving_average(const std::vector<double>& v, int window);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    double stroke_width = 1.0;
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 860;
    int height = 480;
};

/// Pure-vector line plot. One <polyline> per series carrying a
/// data-series attribute, plus axes, ticks and a legend. The root element
/// records the data window (data-xmin/xmax/ymin/ymax) and the pixel plot
/// area (data-plot-x/y/w/h) so coordinates can be checked externally.
/// Throws std::invalid_argument when no series has any points.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

/// Pixel mapping used by the renderer, exposed for exact checks:
/// px = plot_x + (x - xmin) / (xmax - xmin) * plot_w (y analogous, flipped).
double plot_map(double v, double lo, double hi, double pix_lo, double pix_span, bool flip);

}  // namespace hrlnav::io
