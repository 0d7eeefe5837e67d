#include "anscombe/plot.hpp"

#include "anscombe/error.hpp"
#include "anscombe/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace anscombe::plot {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::vector<Curve> curves_from_csv(std::string_view text, const std::string& name) {
    std::vector<std::string> header;
    std::vector<Curve> cols;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (header.empty()) {
            if (cells.size() < 2) throw Error(ErrorKind::Input, "plot: '" + name + "' needs a time column and a value column");
            for (auto c : cells) header.emplace_back(c);
            cols.resize(cells.size() - 1);
            continue;
        }
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::Input, "plot: '" + name + "' line " + std::to_string(line_no) + " has " +
                                              std::to_string(cells.size()) + " columns");
        }
        const double x = io::parse_double(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (cells[c].empty()) continue;
            const double y = io::parse_double(cells[c]);
            if (!std::isfinite(y)) continue;
            cols[c - 1].x.push_back(x);
            cols[c - 1].y.push_back(y);
        }
    }
    if (header.empty()) throw Error(ErrorKind::Input, "plot: '" + name + "' is empty");
    std::vector<Curve> out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].x.empty()) continue;
        cols[c].label = header[c + 1];
        out.push_back(std::move(cols[c]));
    }
    if (out.empty()) throw Error(ErrorKind::Input, "plot: '" + name + "' has no values");
    for (auto& c : out) c.label = out.size() == 1 ? name : name + ":" + c.label;
    return out;
}

std::string render_svg(const std::vector<Curve>& curves, const Axes& axes) {
    if (curves.empty()) throw Error(ErrorKind::Input, "plot: no curves");
    const auto xmap = [&](double x) { return axes.log_x ? std::log10(x) : x; };
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const auto& c : curves) {
        if (c.x.size() != c.y.size() || c.x.size() < 2) {
            throw Error(ErrorKind::Input, "plot: curve '" + c.label + "' needs at least two points");
        }
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i]) || (axes.log_x && !(c.x[i] > 0.0))) {
                throw Error(ErrorKind::Input, "plot: curve '" + c.label + "' has a point outside the axes");
            }
            x_lo = std::min(x_lo, xmap(c.x[i]));
            x_hi = std::max(x_hi, xmap(c.x[i]));
            y_lo = std::min(y_lo, c.y[i]);
            y_hi = std::max(y_hi, c.y[i]);
        }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;

    const double left = 64.0;
    const double right = static_cast<double>(axes.width) - 160.0;
    const double top = 20.0;
    const double bottom = static_cast<double>(axes.height) - 48.0;
    const auto px = [&](double x) { return left + (xmap(x) - x_lo) / (x_hi - x_lo) * (right - left); };
    const auto py = [&](double y) { return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(axes.width) + "\" height=\"" +
         std::to_string(axes.height) + "\" viewBox=\"0 0 " + std::to_string(axes.width) + " " +
         std::to_string(axes.height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(axes.width) + "\" height=\"" +
         std::to_string(axes.height) + "\" fill=\"white\"/>\n";
    s += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(right - left) +
         "\" height=\"" + fixed(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";

    s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x_lo + (x_hi - x_lo) * k / 4.0;
        const double xv = axes.log_x ? std::pow(10.0, fx) : fx;
        const double X = left + (right - left) * k / 4.0;
        s += "<text x=\"" + fixed(X) + "\" y=\"" + fixed(bottom + 16.0) + "\" text-anchor=\"middle\">" +
             tick(xv) + "</text>\n";
        const double yv = y_lo + (y_hi - y_lo) * k / 4.0;
        const double Y = bottom - (bottom - top) * k / 4.0;
        s += "<text x=\"" + fixed(left - 6.0) + "\" y=\"" + fixed(Y + 4.0) + "\" text-anchor=\"end\">" +
             tick(yv) + "</text>\n";
    }
    s += "<text x=\"" + fixed((left + right) / 2.0) + "\" y=\"" + fixed(bottom + 36.0) +
         "\" text-anchor=\"middle\">" + escape(axes.x_label) + (axes.log_x ? " (log scale)" : "") + "</text>\n";
    s += "<text x=\"14\" y=\"" + fixed((top + bottom) / 2.0) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         fixed((top + bottom) / 2.0) + ")\">" + escape(axes.y_label) + "</text>\n";
    s += "</g>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& cv = curves[c];
        s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"";
        s += kPalette[c % kPalette.size()];
        s += "\" points=\"";
        for (std::size_t i = 0; i < cv.x.size(); ++i) {
            if (i > 0) s += ' ';
            s += fixed(px(cv.x[i])) + "," + fixed(py(cv.y[i]));
        }
        s += "\"/>\n";
    }

    s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const double Y = top + 12.0 + 16.0 * static_cast<double>(c);
        s += "<line x1=\"" + fixed(right + 10.0) + "\" y1=\"" + fixed(Y) + "\" x2=\"" + fixed(right + 30.0) +
             "\" y2=\"" + fixed(Y) + "\" stroke-width=\"1.5\" stroke=\"" + kPalette[c % kPalette.size()] + "\"/>\n";
        s += "<text x=\"" + fixed(right + 36.0) + "\" y=\"" + fixed(Y + 4.0) + "\">" + escape(curves[c].label) +
             "</text>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

}  // namespace anscombe::plot
