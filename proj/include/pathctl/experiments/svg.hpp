#pragma once

// Minimal deterministic SVG line and bar charts. Output depends only on the
// data, so rendered files can be diffed across runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pathctl/errors.hpp"
#include "pathctl/experiments/csv.hpp"

namespace pathctl::experiments {

struct Series
{
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool bars = false;
};

struct Panel
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

struct Figure
{
    std::string title;
    std::size_t columns = 1;
    std::vector<Panel> panels;
};

namespace detail {

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline std::string render_svg(const Figure& fig)
{
    if (fig.panels.empty()) {
        throw InvalidArgument("figure has no panels");
    }
    constexpr double pw = 480.0, ph = 260.0, ml = 64.0, mr = 16.0, mt = 28.0, mb = 40.0, title_h = 30.0;
    const std::size_t cols = std::max<std::size_t>(1, fig.columns);
    const std::size_t rows = (fig.panels.size() + cols - 1) / cols;
    const double width = pw * static_cast<double>(cols);
    const double height = title_h + ph * static_cast<double>(rows);

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(width) + "\" height=\""
        + detail::num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + detail::num(width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        + detail::escape(fig.title) + "</text>\n";

    for (std::size_t p = 0; p < fig.panels.size(); ++p) {
        const Panel& panel = fig.panels[p];
        if (panel.series.empty()) {
            throw InvalidArgument("panel '" + panel.title + "' has no series");
        }
        double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
        for (const Series& s : panel.series) {
            if (s.x.empty() || s.x.size() != s.y.size()) {
                throw InvalidArgument("series '" + s.name + "' is empty or has mismatched x/y lengths");
            }
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
            if (s.bars) y0 = std::min(y0, 0.0);
        }
        if (!std::isfinite(x0)) {
            throw InvalidArgument("panel '" + panel.title + "' has no finite points");
        }
        if (x1 == x0) x1 = x0 + 1.0;
        if (y1 == y0) {
            y0 -= 0.5;
            y1 += 0.5;
        }

        const double ox = pw * static_cast<double>(p % cols);
        const double oy = title_h + ph * static_cast<double>(p / cols);
        const double left = ox + ml, right = ox + pw - mr, top = oy + mt, bottom = oy + ph - mb;
        auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
        auto py = [&](double y) { return bottom - (y - y0) / (y1 - y0) * (bottom - top); };

        out += "<g>\n";
        out += "<text x=\"" + detail::num((left + right) / 2) + "\" y=\"" + detail::num(oy + 18)
            + "\" text-anchor=\"middle\" font-size=\"12\">" + detail::escape(panel.title) + "</text>\n";
        out += "<rect x=\"" + detail::num(left) + "\" y=\"" + detail::num(top) + "\" width=\""
            + detail::num(right - left) + "\" height=\"" + detail::num(bottom - top)
            + "\" fill=\"none\" stroke=\"#444\"/>\n";
        // Axis extremes as tick labels.
        out += "<text x=\"" + detail::num(left) + "\" y=\"" + detail::num(bottom + 14) + "\" text-anchor=\"start\">"
            + detail::num(x0) + "</text>\n";
        out += "<text x=\"" + detail::num(right) + "\" y=\"" + detail::num(bottom + 14) + "\" text-anchor=\"end\">"
            + detail::num(x1) + "</text>\n";
        out += "<text x=\"" + detail::num(left - 4) + "\" y=\"" + detail::num(bottom) + "\" text-anchor=\"end\">"
            + detail::num(y0) + "</text>\n";
        out += "<text x=\"" + detail::num(left - 4) + "\" y=\"" + detail::num(top + 8) + "\" text-anchor=\"end\">"
            + detail::num(y1) + "</text>\n";
        out += "<text x=\"" + detail::num((left + right) / 2) + "\" y=\"" + detail::num(bottom + 30)
            + "\" text-anchor=\"middle\">" + detail::escape(panel.x_label) + "</text>\n";
        out += "<text transform=\"translate(" + detail::num(ox + 14) + "," + detail::num((top + bottom) / 2)
            + ") rotate(-90)\" text-anchor=\"middle\">" + detail::escape(panel.y_label) + "</text>\n";

        for (const Series& s : panel.series) {
            if (s.bars) {
                const double w = s.x.size() > 1 ? (px(s.x[1]) - px(s.x[0])) : (right - left);
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    if (!std::isfinite(s.y[i])) continue;
                    const double yb = py(std::max(y0, 0.0));
                    const double yt = py(s.y[i]);
                    out += "<rect x=\"" + detail::num(px(s.x[i])) + "\" y=\"" + detail::num(std::min(yt, yb))
                        + "\" width=\"" + detail::num(std::max(w - 1.0, 0.5)) + "\" height=\""
                        + detail::num(std::abs(yb - yt)) + "\" fill=\"" + s.color + "\"/>\n";
                }
                continue;
            }
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\" points=\"";
            bool first = true;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                if (!first) out += ' ';
                out += detail::num(px(s.x[i])) + "," + detail::num(py(s.y[i]));
                first = false;
            }
            out += "\"><title>" + detail::escape(s.name) + "</title></polyline>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Stacks one panel per y column against a shared x column.
inline Figure figure_from_csv(const CsvTable& t, const std::string& x_column, const std::vector<std::string>& y_columns,
                              const std::string& title)
{
    if (t.rows.empty()) {
        throw InvalidArgument("CSV has no data rows");
    }
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    Figure fig;
    fig.title = title;
    const auto x = t.values(x_column);
    for (std::size_t i = 0; i < y_columns.size(); ++i) {
        Panel p;
        p.title = y_columns[i];
        p.x_label = x_column;
        p.y_label = y_columns[i];
        p.series.push_back({y_columns[i], x, t.values(y_columns[i]), palette[i % 6], false});
        fig.panels.push_back(std::move(p));
    }
    return fig;
}

/// Upper panel X against s/t, lower panel u against s/t.
inline Figure walrasian_layout(const CsvTable& trajectory)
{
    Figure fig = figure_from_csv(trajectory, "s_over_t", {"X", "u"}, "Walrasian feedback simulation");
    fig.panels[0].title = "market share X(s)";
    fig.panels[1].title = "advertising control u(s)";
    fig.panels[1].series[0].color = "#d62728";
    return fig;
}

}  // namespace pathctl::experiments
