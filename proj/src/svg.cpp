#include "rdrag/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rdrag::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi == lo) lo -= 0.5, hi += 0.5;
    }
};

struct Frame {
    Range x, y;
    double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const {
        return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom);
    }
};

std::string header(const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" +
           num(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" + escape(title) +
           "</text>\n";
}

std::string axes(const Frame& f, const std::string& x_label, const std::string& y_label) {
    std::string out;
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) +
           "\" height=\"" + num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.x.lo + (f.x.hi - f.x.lo) * k / 4.0;
        const double yv = f.y.lo + (f.y.hi - f.y.lo) * k / 4.0;
        out += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(y0 + 15) +
               "\" text-anchor=\"middle\">" + num(xv) + "</text>\n";
        out += "<text x=\"" + num(x0 - 5) + "\" y=\"" + num(f.py(yv) + 4) +
               "\" text-anchor=\"end\">" + num(yv) + "</text>\n";
    }
    out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
    out += "<text transform=\"translate(14," + num((y0 + y1) / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
    return out;
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label, std::span<const Series> series) {
    Frame f;
    for (const auto& s : series) {
        for (double v : s.x) f.x.add(v);
        for (double v : s.y) f.y.add(v);
    }
    f.x.settle();
    f.y.settle();

    std::string out = header(title) + axes(f, x_label, y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % std::size(kColors)];
        out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"";
        out += color;
        out += "\" points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out += num(f.px(s.x[i])) + "," + num(f.py(s.y[i])) + " ";
        }
        out += "\"/>\n";
        out += "<text x=\"" + num(kWidth - kRight - 5) + "\" y=\"" + num(kTop + 14 + 14.0 * k) +
               "\" text-anchor=\"end\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string heatmap(const std::string& title, const std::string& x_label,
                    const std::string& y_label, std::span<const double> cols,
                    std::span<const double> rows, std::span<const double> values) {
    Frame f;
    for (double v : cols) f.x.add(v);
    for (double v : rows) f.y.add(v);
    f.x.settle();
    f.y.settle();
    Range z;
    for (double v : values) z.add(v);
    z.settle();

    // Cells are centred on the grid values: pad the axes by half a spacing.
    const auto spacing = [](std::span<const double> v, const Range& r) {
        return v.size() > 1 ? (r.hi - r.lo) / static_cast<double>(v.size() - 1) : 1.0;
    };
    const double dx = spacing(cols, f.x);
    const double dy = spacing(rows, f.y);
    f.x.lo -= dx / 2, f.x.hi += dx / 2;
    f.y.lo -= dy / 2, f.y.hi += dy / 2;

    std::string out = header(title);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double v = values[r * cols.size() + c];
            if (!std::isfinite(v)) continue;
            const double t = (v - z.lo) / (z.hi - z.lo);
            // Dark blue -> yellow.
            const int red = static_cast<int>(std::lround(30 + 225 * t));
            const int green = static_cast<int>(std::lround(40 + 200 * t));
            const int blue = static_cast<int>(std::lround(120 - 100 * t));
            char fill[16];
            std::snprintf(fill, sizeof fill, "#%02x%02x%02x", red, green, blue);
            const double x0 = f.px(cols[c] - dx / 2), x1 = f.px(cols[c] + dx / 2);
            const double y0 = f.py(rows[r] + dy / 2), y1 = f.py(rows[r] - dy / 2);
            out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
                   num(x1 - x0 + 0.3) + "\" height=\"" + num(y1 - y0 + 0.3) + "\" fill=\"" + fill +
                   "\"/>\n";
        }
    }
    out += axes(f, x_label, y_label);
    out += "<text x=\"" + num(kWidth - kRight) + "\" y=\"" + num(kTop - 8) +
           "\" text-anchor=\"end\">range " + num(z.lo) + " .. " + num(z.hi) + "</text>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace rdrag::svg
