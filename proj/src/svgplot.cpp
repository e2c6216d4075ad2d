#include "hrlnav/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hrlnav/csvio.hpp"

namespace hrlnav::io {

std::vector<double> moving_average(const std::vector<double>& v, int window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    std::vector<double> out(v.size());
    double running = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        running += v[i];
        if (i >= static_cast<size_t>(window)) running -= v[i - window];
        const auto n = std::min<size_t>(i + 1, static_cast<size_t>(window));
        out[i] = running / static_cast<double>(n);
    }
    return out;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 48.0;

}  // namespace

double plot_map(double v, double lo, double hi, double pix_lo, double pix_span, bool flip) {
    const double f = (v - lo) / (hi - lo);
    return flip ? pix_lo + pix_span * (1.0 - f) : pix_lo + pix_span * f;
}

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
    bool any = false;
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("plot: series '" + s.name + "' has mismatched x/y sizes");
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (!any) throw std::invalid_argument("plot: no data points in any series");
    // A degenerate window still needs a drawable span.
    if (xmin == xmax) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymin == ymax) {
        ymin -= 1.0;
        ymax += 1.0;
    }

    const double plot_x = kMarginLeft;
    const double plot_y = kMarginTop;
    const double plot_w = spec.width - kMarginLeft - kMarginRight;
    const double plot_h = spec.height - kMarginTop - kMarginBottom;

    auto px = [&](double x) { return plot_map(x, xmin, xmax, plot_x, plot_w, false); };
    auto py = [&](double y) { return plot_map(y, ymin, ymax, plot_y, plot_h, true); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\""
        << " data-xmin=\"" << csv_number(xmin) << "\" data-xmax=\"" << csv_number(xmax) << "\""
        << " data-ymin=\"" << csv_number(ymin) << "\" data-ymax=\"" << csv_number(ymax) << "\""
        << " data-plot-x=\"" << csv_number(plot_x) << "\" data-plot-y=\"" << csv_number(plot_y)
        << "\" data-plot-w=\"" << csv_number(plot_w) << "\" data-plot-h=\"" << csv_number(plot_h)
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << csv_number(plot_x) << "\" y=\"" << csv_number(plot_y) << "\" width=\""
        << csv_number(plot_w) << "\" height=\"" << csv_number(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    if (!spec.title.empty()) {
        svg << "<text x=\"" << csv_number(spec.width / 2.0)
            << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
            << xml_escape(spec.title) << "</text>\n";
    }

    const int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / kTicks;
        const double fy = ymin + (ymax - ymin) * i / kTicks;
        const double tx = px(fx);
        const double ty = py(fy);
        svg << "<line x1=\"" << csv_number(tx) << "\" y1=\"" << csv_number(plot_y + plot_h)
            << "\" x2=\"" << csv_number(tx) << "\" y2=\"" << csv_number(plot_y + plot_h + 5)
            << "\" stroke=\"#444444\"/>\n";
        svg << "<text x=\"" << csv_number(tx) << "\" y=\"" << csv_number(plot_y + plot_h + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << csv_number(fx) << "</text>\n";
        svg << "<line x1=\"" << csv_number(plot_x - 5) << "\" y1=\"" << csv_number(ty)
            << "\" x2=\"" << csv_number(plot_x) << "\" y2=\"" << csv_number(ty)
            << "\" stroke=\"#444444\"/>\n";
        svg << "<text x=\"" << csv_number(plot_x - 8) << "\" y=\"" << csv_number(ty + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << csv_number(fy) << "</text>\n";
    }
    if (!spec.x_label.empty()) {
        svg << "<text x=\"" << csv_number(plot_x + plot_w / 2.0) << "\" y=\""
            << csv_number(spec.height - 10.0)
            << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
            << xml_escape(spec.x_label) << "</text>\n";
    }
    if (!spec.y_label.empty()) {
        svg << "<text x=\"16\" y=\"" << csv_number(plot_y + plot_h / 2.0)
            << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\""
            << " transform=\"rotate(-90 16 " << csv_number(plot_y + plot_h / 2.0) << ")\">"
            << xml_escape(spec.y_label) << "</text>\n";
    }

    for (const auto& s : series) {
        if (s.x.empty()) continue;
        svg << "<polyline data-series=\"" << xml_escape(s.name) << "\" fill=\"none\" stroke=\""
            << s.color << "\" stroke-width=\"" << csv_number(s.stroke_width) << "\"";
        if (s.dashed) svg << " stroke-dasharray=\"5,4\"";
        svg << " points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (i) svg << ' ';
            svg << csv_number(px(s.x[i])) << ',' << csv_number(py(s.y[i]));
        }
        svg << "\"/>\n";
    }

    double legend_y = plot_y + 14.0;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        svg << "<line x1=\"" << csv_number(plot_x + 10) << "\" y1=\"" << csv_number(legend_y - 4)
            << "\" x2=\"" << csv_number(plot_x + 34) << "\" y2=\"" << csv_number(legend_y - 4)
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n";
        svg << "<text x=\"" << csv_number(plot_x + 40) << "\" y=\"" << csv_number(legend_y)
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << xml_escape(s.name)
            << "</text>\n";
        legend_y += 16.0;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hrlnav::io
