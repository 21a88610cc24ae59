#pragma once

// Independent reference computations and seeded generators shared by the unit
// tests and the acceptance gate.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dlfm/barcode.hpp"
#include "dlfm/chen.hpp"
#include "dlfm/rng.hpp"
#include "dlfm/timeseries.hpp"
#include "dlfm/words.hpp"

namespace oracle {

using dlfm::Bar;
using dlfm::Barcode;
using dlfm::SplitMix64;

inline double tent(const Bar& b, double t) { return std::max(0.0, std::min(t - b.birth, b.death - t)); }

/// k-th largest tent value at t (k is 1-based).
inline double kth_tent(const Barcode& bc, std::size_t k, double t) {
    std::vector<double> v;
    for (const Bar& b : bc.bars()) v.push_back(tent(b, t));
    if (k > v.size()) return 0.0;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end(), std::greater<>());
    return v[k - 1];
}

/// Bottleneck distance by enumerating every partial matching.
inline double bottleneck_enumerate(const Barcode& a, const Barcode& b) {
    const auto A = a.bars();
    const auto B = b.bars();
    std::vector<bool> used(B.size(), false);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cost) {
        if (cost >= best) return;
        if (i == A.size()) {
            double c = cost;
            for (std::size_t j = 0; j < B.size(); ++j)
                if (!used[j]) c = std::max(c, (B[j].death - B[j].birth) / 2);
            best = std::min(best, c);
            return;
        }
        rec(i + 1, std::max(cost, (A[i].death - A[i].birth) / 2));
        for (std::size_t j = 0; j < B.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            rec(i + 1, std::max(cost, std::max(std::abs(A[i].birth - B[j].birth), std::abs(A[i].death - B[j].death))));
            used[j] = false;
        }
    };
    rec(0, 0.0);
    return best;
}

inline double monomial_value(const dlfm::isig::Monomial& m, const double* delta) {
    double v = 1.0;
    for (std::size_t i = 0; i < m.exponents.size(); ++i)
        for (unsigned e = 0; e < m.exponents[i]; ++e) v *= delta[i];
    return v;
}

/// <S(x), w> by recursion over the position of the first letter.
inline double isig_word(const dlfm::TimeSeries& x, const dlfm::isig::Word& w) {
    const std::size_t d = x.dim(), steps = x.length() - 1;
    std::vector<double> diffs(steps * d);
    for (std::size_t j = 0; j < steps; ++j)
        for (std::size_t i = 0; i < d; ++i) diffs[j * d + i] = x.point(j + 1)[i] - x.point(j)[i];
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t letter, std::size_t from) {
        if (letter == w.letters.size()) return 1.0;
        double s = 0.0;
        for (std::size_t j = from; j < steps; ++j)
            s += monomial_value(w.letters[letter], &diffs[j * d]) * rec(letter + 1, j + 1);
        return s;
    };
    return rec(0, 0);
}

/// Level-2 Chen signature of a polygonal path in closed form:
/// sum_{a<b} x_a (x) x_b + sum_a x_a (x) x_a / 2.
inline std::vector<double> chen_level2(const std::vector<std::vector<double>>& segs, std::size_t d) {
    std::vector<double> s(d * d, 0.0);
    for (std::size_t a = 0; a < segs.size(); ++a)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                s[i * d + j] += 0.5 * segs[a][i] * segs[a][j];
                for (std::size_t b = a + 1; b < segs.size(); ++b) s[i * d + j] += segs[a][i] * segs[b][j];
            }
    return s;
}

/// Level-3 Chen signature of a polygonal path in closed form.
inline std::vector<double> chen_level3(const std::vector<std::vector<double>>& x, std::size_t d) {
    const std::size_t m = x.size();
    std::vector<double> s(d * d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                double v = 0.0;
                for (std::size_t a = 0; a < m; ++a) {
                    v += x[a][i] * x[a][j] * x[a][k] / 6.0;
                    for (std::size_t b = a + 1; b < m; ++b) {
                        v += 0.5 * x[a][i] * x[a][j] * x[b][k] + 0.5 * x[a][i] * x[b][j] * x[b][k];
                        for (std::size_t c = b + 1; c < m; ++c) v += x[a][i] * x[b][j] * x[c][k];
                    }
                }
                s[(i * d + j) * d + k] = v;
            }
    return s;
}

// ---- seeded generators ----------------------------------------------------

inline double lattice(double v, double step) { return std::round(v / step) * step; }

/// Up to `max_bars` bars with endpoints in [0, 10].
inline Barcode random_barcode(SplitMix64& rng, std::size_t max_bars, double step = 0.0) {
    const std::size_t n = static_cast<std::size_t>(rng.below(max_bars + 1));
    std::vector<Bar> bars;
    for (std::size_t i = 0; i < n; ++i) {
        double b = rng.uniform(0.0, 8.0), d = b + rng.uniform(0.05, 4.0);
        if (step > 0) b = lattice(b, step), d = std::max(b, lattice(d, step));
        bars.push_back({b, d});
    }
    return Barcode(std::move(bars));
}

/// Same bars with every endpoint moved by at most eps, staying valid.
inline Barcode perturb(const Barcode& bc, double eps, SplitMix64& rng) {
    std::vector<Bar> bars;
    for (const Bar& b : bc.bars()) {
        const double nb = std::max(0.0, b.birth + rng.uniform(-eps, eps));
        double nd = b.death + rng.uniform(-eps, eps);
        nd = std::max(nd, nb);
        bars.push_back({nb, nd});
    }
    return Barcode(std::move(bars));
}

/// Pairwise non-overlapping bars (depth one landscape).
inline Barcode single_level_barcode(SplitMix64& rng, std::size_t max_bars) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.below(max_bars));
    std::vector<Bar> bars;
    double cursor = rng.uniform(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double len = rng.uniform(0.1, 3.0);
        bars.push_back({cursor, cursor + len});
        cursor += len + rng.uniform(0.0, 1.0);
    }
    return Barcode(std::move(bars));
}

inline dlfm::TimeSeries random_series(SplitMix64& rng, std::size_t n, std::size_t d) {
    std::vector<double> flat(n * d);
    for (double& v : flat) v = rng.uniform(-1.0, 1.0);
    return dlfm::TimeSeries(d, std::move(flat));
}

inline std::vector<std::vector<double>> random_segments(SplitMix64& rng, std::size_t m, std::size_t d) {
    std::vector<std::vector<double>> s(m, std::vector<double>(d));
    for (auto& seg : s)
        for (double& v : seg) v = rng.uniform(-1.0, 1.0);
    return s;
}

/// Closed polygon: the last segment returns to the start.
inline std::vector<std::vector<double>> random_loop(SplitMix64& rng, std::size_t m, std::size_t d) {
    auto s = random_segments(rng, m - 1, d);
    std::vector<double> back(d, 0.0);
    for (const auto& seg : s)
        for (std::size_t i = 0; i < d; ++i) back[i] -= seg[i];
    s.push_back(back);
    return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const dlfm::chen::TensorSeries& a, const dlfm::chen::TensorSeries& b) {
    double m = 0.0;
    for (std::size_t k = 0; k <= a.max_order(); ++k) {
        const auto x = a.level(k), y = b.level(k);
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

inline std::string hex(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

}  // namespace oracle
