#include "dlfm/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dlfm/error.hpp"

namespace dlfm {

TimeSeries::TimeSeries(std::size_t dim) : dim_(dim), data_(dim, 0.0) {
    if (dim == 0) throw ShapeError("time series dimension must be >= 1");
}

TimeSeries::TimeSeries(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
    if (dim == 0) throw ShapeError("time series dimension must be >= 1");
    if (data_.empty() || data_.size() % dim != 0)
        throw ShapeError("time series needs n >= 1 points of dimension " + std::to_string(dim));
}

TimeSeries TimeSeries::from_points(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw ShapeError("time series needs at least one point");
    const std::size_t d = points.front().size();
    std::vector<double> flat;
    flat.reserve(d * points.size());
    for (const auto& p : points) {
        if (p.size() != d) throw ShapeError("ragged time series");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return TimeSeries(d, std::move(flat));
}

TimeSeries twr_reduce(const TimeSeries& x) {
    const std::size_t d = x.dim();
    std::vector<double> out(x.point(0).begin(), x.point(0).end());
    for (std::size_t j = 1; j < x.length(); ++j) {
        const auto p = x.point(j);
        if (!std::equal(p.begin(), p.end(), out.end() - static_cast<std::ptrdiff_t>(d)))
            out.insert(out.end(), p.begin(), p.end());
    }
    return TimeSeries(d, std::move(out));
}

TimeSeries time_translate(const TimeSeries& x, std::span<const double> y) {
    if (y.size() != x.dim()) throw ShapeError("time_translate: dimension mismatch");
    std::vector<double> out(x.flat().begin(), x.flat().end());
    for (std::size_t j = 0; j < x.length(); ++j)
        for (std::size_t i = 0; i < x.dim(); ++i) out[j * x.dim() + i] -= y[i];
    return TimeSeries(x.dim(), std::move(out));
}

TimeSeries shifted_concat(const TimeSeries& x, const TimeSeries& y) {
    if (x.dim() != y.dim()) throw ShapeError("shifted_concat: dimension mismatch");
    const std::size_t d = x.dim();
    std::vector<double> out(x.flat().begin(), x.flat().end());
    out.reserve(out.size() + y.flat().size());
    const auto last = x.point(x.length() - 1);
    const auto first = y.point(0);
    for (std::size_t j = 0; j < y.length(); ++j) {
        const auto p = y.point(j);
        // The j = 0 term evaluates to x_n exactly (y_1 - y_1 = 0).
        for (std::size_t i = 0; i < d; ++i) out.push_back((p[i] - first[i]) + last[i]);
    }
    return TimeSeries(d, std::move(out));
}

TimeSeries difference_series(const TimeSeries& x) {
    if (x.length() < 2) throw ShapeError("difference_series: needs at least two points");
    const std::size_t d = x.dim();
    std::vector<double> out;
    out.reserve(d * (x.length() - 1));
    for (std::size_t j = 0; j + 1 < x.length(); ++j) {
        const auto a = x.point(j), b = x.point(j + 1);
        for (std::size_t i = 0; i < d; ++i) out.push_back(b[i] - a[i]);
    }
    return TimeSeries(d, std::move(out));
}

double ts_distance(const TimeSeries& x, const TimeSeries& y) {
    if (x.dim() != y.dim() || x.length() != y.length())
        throw ShapeError("ts_distance: series must have equal length and dimension");
    double best = 0.0;
    for (std::size_t j = 0; j < x.length(); ++j) {
        double s = 0.0;
        const auto a = x.point(j), b = y.point(j);
        for (std::size_t i = 0; i < x.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

TimeSeries apply_operator(const TimeSeries& x, WarpOperator w) {
    const std::size_t d = x.dim(), n = x.length();
    switch (w.op) {
        case WarpOp::Translation:
            return time_translate(x, x.point(0));
        case WarpOp::Delta:
            return difference_series(x);
        case WarpOp::Extension: {
            if (w.position >= n) throw ShapeError("extension position out of range");
            std::vector<double> out(x.flat().begin(), x.flat().end());
            const auto p = x.point(w.position);
            out.insert(out.begin() + static_cast<std::ptrdiff_t>((w.position + 1) * d), p.begin(),
                       p.end());
            return TimeSeries(d, std::move(out));
        }
        case WarpOp::Contraction: {
            if (w.position + 1 >= n) throw ShapeError("contraction position out of range");
            const auto a = x.point(w.position), b = x.point(w.position + 1);
            if (!std::equal(a.begin(), a.end(), b.begin()))
                throw ShapeError("contraction at a non-repeated position");
            std::vector<double> out(x.flat().begin(), x.flat().end());
            const auto at = out.begin() + static_cast<std::ptrdiff_t>((w.position + 1) * d);
            out.erase(at, at + static_cast<std::ptrdiff_t>(d));
            return TimeSeries(d, std::move(out));
        }
    }
    throw ShapeError("unknown warp operator");
}

}  // namespace dlfm
