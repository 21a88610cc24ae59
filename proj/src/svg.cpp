#include "dlfm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dlfm::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi - lo < 1e-300) lo -= 0.5, hi += 0.5;
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

class Canvas {
public:
    Canvas(Range x, Range y, const std::string& title) : x_(x), y_(y) {
        out_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
               num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
        out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out_ += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                "font-size=\"15\">" + escape(title) + "</text>\n";
    }

    double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const {
        return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
    }

    void axes(const std::string& xl, const std::string& yl) {
        const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
        out_ += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">";
        out_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>";
        out_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>";
        out_ += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
        for (int i = 0; i <= 4; ++i) {
            const double vx = x_.lo + (x_.hi - x_.lo) * i / 4.0, vy = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            out_ += "<text x=\"" + num(px(vx)) + "\" y=\"" + num(y0 + 16) + "\" text-anchor=\"middle\">" +
                    num(vx) + "</text>\n";
            out_ += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py(vy) + 4) + "\" text-anchor=\"end\">" +
                    num(vy) + "</text>\n";
        }
        out_ += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
                escape(xl) + "</text>\n";
        out_ += "<text x=\"14\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
                num((y0 + y1) / 2) + ")\">" + escape(yl) + "</text>\n</g>\n";
    }

    void raw(const std::string& s) { out_ += s; }
    std::string finish() { return out_ + "</svg>\n"; }

private:
    Range x_, y_;
    std::string out_;
};

}  // namespace

std::string landscape_plot(const Landscape& l, const std::string& title) {
    Range x, y;
    x.add(0.0);
    x.add(l.span());
    y.add(0.0);
    for (const auto& level : l.levels())
        for (const auto& p : level.pairs()) {
            x.add(p.t);
            y.add(p.value);
        }
    x.finish();
    y.finish();
    Canvas c(x, y, title);
    c.axes("t", "lambda_k(t)");
    std::size_t k = 0;
    for (const auto& level : l.levels()) {
        const char* colour = kPalette[k++ % std::size(kPalette)];
        if (level.identically_zero()) continue;
        std::string pts;
        for (const auto& p : level.pairs()) pts += num(c.px(p.t)) + "," + num(c.py(p.value)) + " ";
        pts.pop_back();
        c.raw("<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" +
              pts + "\"><title>level " + std::to_string(k) + "</title></polyline>\n");
    }
    return c.finish();
}

std::string scatter_plot(std::span<const double> xy, std::span<const int> labels,
                         const std::vector<std::string>& class_names, const std::string& title,
                         const std::string& x_label, const std::string& y_label) {
    const std::size_t n = xy.size() / 2;
    Range x, y;
    for (std::size_t i = 0; i < n; ++i) {
        x.add(xy[2 * i]);
        y.add(xy[2 * i + 1]);
    }
    x.finish();
    y.finish();
    Canvas c(x, y, title);
    c.axes(x_label, y_label);
    for (std::size_t i = 0; i < n; ++i) {
        const int lab = i < labels.size() ? labels[i] : 0;
        c.raw("<circle cx=\"" + num(c.px(xy[2 * i])) + "\" cy=\"" + num(c.py(xy[2 * i + 1])) +
              "\" r=\"3.5\" fill=\"" + kPalette[static_cast<std::size_t>(lab) % std::size(kPalette)] +
              "\" fill-opacity=\"0.8\"/>\n");
    }
    for (std::size_t k = 0; k < class_names.size(); ++k) {
        const double ly = kTop + 8 + 16.0 * static_cast<double>(k);
        c.raw("<circle cx=\"" + num(kWidth - kRight - 90) + "\" cy=\"" + num(ly) + "\" r=\"4\" fill=\"" +
              kPalette[k % std::size(kPalette)] + "\"/><text x=\"" + num(kWidth - kRight - 80) + "\" y=\"" +
              num(ly + 4) + "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(class_names[k]) +
              "</text>\n");
    }
    return c.finish();
}

std::string histogram_plot(std::span<const double> null_values, double observed, const std::string& title,
                           std::size_t bins) {
    bins = std::max<std::size_t>(bins, 1);
    Range x;
    for (double v : null_values) x.add(v);
    x.add(observed);
    x.finish();
    std::vector<std::size_t> counts(bins, 0);
    for (double v : null_values) {
        if (!std::isfinite(v)) continue;
        auto b = static_cast<std::size_t>((v - x.lo) / (x.hi - x.lo) * static_cast<double>(bins));
        ++counts[std::min(b, bins - 1)];
    }
    Range y;
    y.add(0.0);
    y.add(static_cast<double>(*std::max_element(counts.begin(), counts.end())));
    y.finish();
    y.lo = 0.0;
    Canvas c(x, y, title);
    c.axes("statistic", "count");
    const double w = (x.hi - x.lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] == 0) continue;
        const double x0 = c.px(x.lo + w * static_cast<double>(b)), x1 = c.px(x.lo + w * static_cast<double>(b + 1));
        const double top = c.py(static_cast<double>(counts[b])), base = c.py(0.0);
        c.raw("<rect x=\"" + num(x0) + "\" y=\"" + num(top) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
              num(base - top) + "\" fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"0.5\"/>\n");
    }
    if (std::isfinite(observed)) {
        const double ox = c.px(observed);
        c.raw("<line x1=\"" + num(ox) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(ox) + "\" y2=\"" +
              num(kHeight - kBottom) + "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n");
        c.raw("<text x=\"" + num(ox + 4) + "\" y=\"" + num(kTop + 12) +
              "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#d62728\">observed " + num(observed) +
              "</text>\n");
    }
    return c.finish();
}

}  // namespace dlfm::svg
