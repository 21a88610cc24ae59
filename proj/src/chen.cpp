#include "dlfm/chen.hpp"

#include <algorithm>
#include <cmath>

#include "dlfm/error.hpp"
#include "dlfm/simd/kernels.hpp"

namespace dlfm::chen {

namespace {

std::size_t ipow(std::size_t base, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= base;
    return r;
}

void require_same_shape(const TensorSeries& a, const TensorSeries& b, const char* what) {
    if (a.dim() != b.dim() || a.max_order() != b.max_order())
        throw ShapeError(std::string(what) + ": tensor series shapes differ");
}

}  // namespace

TensorSeries::TensorSeries(std::size_t dim, std::size_t max_order) : dim_(dim) {
    if (dim == 0) throw ShapeError("tensor series dimension must be >= 1");
    levels_.reserve(max_order + 1);
    for (std::size_t k = 0; k <= max_order; ++k) levels_.emplace_back(ipow(dim, k), 0.0);
}

TensorSeries TensorSeries::unit(std::size_t dim, std::size_t max_order) {
    TensorSeries t(dim, max_order);
    t.levels_[0][0] = 1.0;
    return t;
}

double& TensorSeries::at(std::size_t k, std::span<const std::size_t> index) {
    if (index.size() != k) throw ShapeError("tensor index length must equal the level");
    std::size_t flat = 0;
    for (std::size_t i : index) flat = flat * dim_ + i;
    return levels_.at(k).at(flat);
}

TensorSeries& TensorSeries::operator+=(const TensorSeries& o) {
    require_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < levels_.size(); ++k)
        for (std::size_t i = 0; i < levels_[k].size(); ++i) levels_[k][i] += o.levels_[k][i];
    return *this;
}

TensorSeries& TensorSeries::operator-=(const TensorSeries& o) {
    require_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < levels_.size(); ++k)
        for (std::size_t i = 0; i < levels_[k].size(); ++i) levels_[k][i] -= o.levels_[k][i];
    return *this;
}

TensorSeries& TensorSeries::operator*=(double c) {
    for (auto& lvl : levels_)
        for (double& v : lvl) v *= c;
    return *this;
}

double TensorSeries::max_abs(bool include_scalar) const {
    double m = 0.0;
    for (std::size_t k = include_scalar ? 0 : 1; k < levels_.size(); ++k)
        for (double v : levels_[k]) m = std::max(m, std::abs(v));
    return m;
}

TensorSeries tensor_mul(const TensorSeries& a, const TensorSeries& b) {
    require_same_shape(a, b, "tensor_mul");
    const auto& kern = simd::active();
    TensorSeries out(a.dim(), a.max_order());
    for (std::size_t k = 0; k <= a.max_order(); ++k) {
        auto dst = out.level(k);
        for (std::size_t i = 0; i <= k; ++i) {
            const auto left = a.level(i);
            const auto right = b.level(k - i);
            for (std::size_t p = 0; p < left.size(); ++p) {
                if (left[p] == 0.0) continue;
                kern.axpy(dst.data() + p * right.size(), right.data(), left[p], right.size());
            }
        }
    }
    return out;
}

TensorSeries tensor_exp(std::span<const double> a, std::size_t max_order) {
    const std::size_t d = a.size();
    TensorSeries out = TensorSeries::unit(d, max_order);
    const auto& kern = simd::active();
    for (std::size_t k = 1; k <= max_order; ++k) {
        // a^{(x)k}/k! = (a^{(x)(k-1)}/(k-1)!) (x) a / k
        const auto prev = out.level(k - 1);
        auto cur = out.level(k);
        for (std::size_t p = 0; p < prev.size(); ++p)
            kern.axpy(cur.data() + p * d, a.data(), prev[p] / static_cast<double>(k), d);
    }
    return out;
}

TensorSeries tensor_exp_series(const TensorSeries& n) {
    if (n.level(0)[0] != 0.0) throw ShapeError("tensor_exp_series: scalar part must vanish");
    // Horner: 1 + N(1 + N/2(1 + N/3(...)))
    const std::size_t m = n.max_order();
    TensorSeries acc = TensorSeries::unit(n.dim(), m);
    for (std::size_t j = m; j >= 1; --j) {
        TensorSeries scaled = n;
        scaled *= 1.0 / static_cast<double>(j);
        acc = tensor_mul(scaled, acc);
        acc.level(0)[0] += 1.0;
    }
    return acc;
}

TensorSeries tensor_log(const TensorSeries& a) {
    if (a.level(0)[0] != 1.0) throw ShapeError("tensor_log: degree-0 term must equal 1");
    const std::size_t m = a.max_order();
    TensorSeries n = a;
    n.level(0)[0] = 0.0;
    TensorSeries out(a.dim(), m);
    TensorSeries power = n;  // N^j
    for (std::size_t j = 1; j <= m; ++j) {
        TensorSeries term = power;
        term *= (j % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(j);
        out += term;
        if (j < m) power = tensor_mul(power, n);
    }
    return out;
}

namespace {

bool positively_parallel(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (dot <= 0.0) return false;
    const double scale = std::sqrt(na * nb);
    return std::abs(dot - scale) <= 1e-12 * scale;
}

}  // namespace

PWLPath::PWLPath(std::size_t dim, const std::vector<std::vector<double>>& segments) : dim_(dim) {
    if (dim == 0) throw ShapeError("path dimension must be >= 1");
    if (segments.empty()) throw ShapeError("path needs at least one segment");
    for (const auto& s : segments) {
        if (s.size() != dim) throw ShapeError("segment dimension mismatch");
        if (std::all_of(s.begin(), s.end(), [](double v) { return v == 0.0; })) continue;
        if (!segments_.empty() && positively_parallel(segments_.back(), s)) {
            for (std::size_t i = 0; i < dim; ++i) segments_.back()[i] += s[i];
        } else {
            segments_.push_back(s);
        }
    }
}

std::vector<double> PWLPath::displacement() const {
    std::vector<double> total(dim_, 0.0);
    for (const auto& s : segments_)
        for (std::size_t i = 0; i < dim_; ++i) total[i] += s[i];
    return total;
}

PWLPath concat(const PWLPath& a, const PWLPath& b) {
    if (a.dim() != b.dim()) throw ShapeError("concat: dimension mismatch");
    std::vector<std::vector<double>> segs;
    for (std::size_t j = 0; j < a.size(); ++j) segs.emplace_back(a.segment(j).begin(), a.segment(j).end());
    for (std::size_t j = 0; j < b.size(); ++j) segs.emplace_back(b.segment(j).begin(), b.segment(j).end());
    if (segs.empty()) segs.emplace_back(a.dim(), 0.0);
    return PWLPath(a.dim(), segs);
}

TensorSeries pwl_signature(const PWLPath& path, std::size_t max_order) {
    if (max_order == 0) throw ShapeError("pwl_signature: max_order must be >= 1");
    TensorSeries sig = TensorSeries::unit(path.dim(), max_order);
    for (std::size_t j = 0; j < path.size(); ++j)
        sig = tensor_mul(sig, tensor_exp(path.segment(j), max_order));
    return sig;
}

MatrixParts signature_matrix_parts(const TensorSeries& a) {
    if (a.max_order() < 2) throw ShapeError("signature_matrix_parts: needs max_order >= 2");
    const std::size_t d = a.dim();
    const auto m = a.level(2);
    MatrixParts parts{d, std::vector<double>(d * d), std::vector<double>(d * d)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            parts.sym[i * d + j] = 0.5 * (m[i * d + j] + m[j * d + i]);
            parts.skew[i * d + j] = 0.5 * (m[i * d + j] - m[j * d + i]);
        }
    return parts;
}

std::vector<double> half_wedge_sum(const PWLPath& path) {
    const std::size_t d = path.dim();
    std::vector<double> w(d * d, 0.0);
    for (std::size_t i = 0; i < path.size(); ++i)
        for (std::size_t j = i + 1; j < path.size(); ++j) {
            const auto a = path.segment(i), b = path.segment(j);
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) w[r * d + c] += 0.5 * (a[r] * b[c] - b[r] * a[c]);
        }
    return w;
}

namespace {

bool close(std::span<const double> a, std::span<const double> b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

bool all_small(std::span<const double> a, double tol) {
    return std::all_of(a.begin(), a.end(), [tol](double v) { return std::abs(v) <= tol; });
}

}  // namespace

LoopReport loop_diagnostics(const PWLPath& path, double tol) {
    const TensorSeries sig = pwl_signature(path, 3);
    const TensorSeries log = tensor_log(sig);
    const std::vector<double> wedge = half_wedge_sum(path);

    LoopReport r;
    r.displacement_zero = all_small(path.displacement(), tol);
    r.level1_vanishes = all_small(sig.level(1), tol) && all_small(log.level(1), tol);
    r.level2_wedge = close(sig.level(2), log.level(2), tol) && close(log.level(2), wedge, tol);
    r.level3_log = close(sig.level(3), log.level(3), tol);
    r.is_loop = r.displacement_zero && r.level1_vanishes && r.level2_wedge && r.level3_log;
    r.consistent = r.displacement_zero == r.level1_vanishes && r.level1_vanishes == r.level2_wedge &&
                   r.level2_wedge == r.level3_log;
    return r;
}

}  // namespace dlfm::chen
