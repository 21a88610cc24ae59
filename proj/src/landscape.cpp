#include "dlfm/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dlfm/error.hpp"
#include "dlfm/simd/kernels.hpp"

namespace dlfm {

namespace {

constexpr double kDedupTol = 1e-12;
constexpr double kSlopeTol = 1e-12;

// Landscape slopes are exactly -1, 0 or +1; snapping keeps repeated values
// bit-identical across segments.
double snapped_slope(const CriticalPair& p, const CriticalPair& q) {
    const double s = (q.value - p.value) / (q.t - p.t);
    for (double canonical : {-1.0, 0.0, 1.0})
        if (std::abs(s - canonical) <= 1e-9) return canonical;
    return s;
}

}  // namespace

double Level::operator()(double t) const noexcept {
    if (pairs_.empty() || t < pairs_.front().t || t > pairs_.back().t) return 0.0;
    auto hi = std::lower_bound(pairs_.begin(), pairs_.end(), t,
                               [](const CriticalPair& p, double x) { return p.t < x; });
    if (hi->t == t) return hi->value;
    const CriticalPair& q = *hi;
    const CriticalPair& p = *(hi - 1);
    return p.value + snapped_slope(p, q) * (t - p.t);
}

std::vector<double> Landscape::evaluate(double t) const {
    std::vector<double> out(levels_.size());
    evaluate_into(t, out);
    return out;
}

void Landscape::evaluate_into(double t, std::span<double> out) const {
    for (std::size_t k = 0; k < levels_.size() && k < out.size(); ++k) out[k] = levels_[k](t);
}

std::vector<double> dedup_sorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values)
        if (out.empty() || v - out.back() > kDedupTol) out.push_back(v);
    return out;
}

std::vector<double> critical_points(const Barcode& barcode) {
    std::vector<Bar> bars;
    for (const Bar& b : barcode.bars())
        if (!b.trivial()) bars.push_back(b);

    std::vector<double> pts;
    pts.reserve(3 * bars.size());
    for (const Bar& b : bars) {
        pts.push_back(b.birth);
        pts.push_back(b.death);
        pts.push_back((b.birth + b.death) / 2);
    }
    for (const Bar& i : bars)
        for (const Bar& j : bars)
            if (i.birth <= j.birth && j.birth < i.death && i.death <= j.death)
                pts.push_back((j.birth + i.death) / 2);
    return dedup_sorted(std::move(pts));
}

namespace {

// Maximum number of non-trivial open intervals sharing a point.
std::size_t overlap_depth(std::span<const Bar> bars) {
    std::vector<std::pair<double, int>> events;
    for (const Bar& b : bars) {
        if (b.trivial()) continue;
        events.emplace_back(b.birth, +1);
        events.emplace_back(b.death, -1);
    }
    // Deaths sort before births at equal t: touching intervals do not overlap.
    std::sort(events.begin(), events.end());
    std::size_t depth = 0, best = 0;
    for (const auto& [t, delta] : events) {
        depth = static_cast<std::size_t>(static_cast<long>(depth) + delta);
        best = std::max(best, depth);
    }
    return best;
}

Level prune(std::vector<CriticalPair> pts) {
    // Trim flat zero runs at both ends, keeping one anchoring zero.
    std::size_t first = 0;
    while (first + 1 < pts.size() && pts[first].value == 0.0 && pts[first + 1].value == 0.0)
        ++first;
    std::size_t last = pts.size();
    while (last >= first + 2 && pts[last - 1].value == 0.0 && pts[last - 2].value == 0.0) --last;

    std::vector<CriticalPair> kept;
    for (std::size_t i = first; i < last; ++i) {
        const CriticalPair& p = pts[i];
        while (kept.size() >= 2) {
            const CriticalPair& a = kept[kept.size() - 2];
            const CriticalPair& b = kept.back();
            const double s1 = (b.value - a.value) / (b.t - a.t);
            const double s2 = (p.value - b.value) / (p.t - b.t);
            if (std::abs(s1 - s2) > kSlopeTol) break;
            kept.pop_back();
        }
        kept.push_back(p);
    }
    if (kept.size() < 2) kept.clear();
    return Level(std::move(kept));
}

}  // namespace

Landscape landscape(const Barcode& barcode) {
    const std::size_t depth = overlap_depth(barcode.bars());
    if (depth == 0) return Landscape({}, barcode.span());

    std::vector<double> births, deaths;
    for (const Bar& b : barcode.bars()) {
        if (b.trivial()) continue;
        births.push_back(b.birth);
        deaths.push_back(b.death);
    }
    const std::vector<double> ts = critical_points(barcode);
    const auto& kern = simd::active();

    std::vector<std::vector<CriticalPair>> raw(depth);
    std::vector<double> tents(births.size());
    for (double t : ts) {
        kern.tent(tents.data(), births.data(), deaths.data(), t, tents.size());
        std::partial_sort(tents.begin(), tents.begin() + static_cast<std::ptrdiff_t>(depth),
                          tents.end(), std::greater<>());
        for (std::size_t k = 0; k < depth; ++k) raw[k].push_back({t, tents[k]});
    }

    std::vector<Level> levels;
    levels.reserve(depth);
    for (auto& pts : raw) levels.push_back(prune(std::move(pts)));
    return Landscape(std::move(levels), barcode.span());
}

Landscape pad_levels(const Landscape& landscape, std::size_t d) {
    if (d == 0) throw ShapeError("pad_levels: d must be >= 1");
    std::vector<Level> levels(landscape.levels().begin(), landscape.levels().end());
    levels.resize(d);
    return Landscape(std::move(levels), landscape.span());
}

}  // namespace dlfm
