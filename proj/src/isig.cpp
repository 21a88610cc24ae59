#include "dlfm/isig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dlfm/error.hpp"
#include "dlfm/simd/kernels.hpp"

namespace dlfm::isig {

ISig::ISig(std::shared_ptr<const WordBasis> basis, std::vector<double> coefficients)
    : basis_(std::move(basis)), coeffs_(std::move(coefficients)) {
    if (!basis_ || coeffs_.size() != basis_->size())
        throw ShapeError("ISig: coefficient count does not match the word basis");
}

double ISig::operator[](const Word& w) const {
    const auto i = basis_->find(w);
    if (!i) throw std::out_of_range("word " + label(w) + " is not in the basis");
    return coeffs_[*i];
}

bool ISig::trivial() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

ISig isig(const TimeSeries& x, unsigned k) { return isig(x, WordBasis::get(x.dim(), k)); }

ISig isig(const TimeSeries& x, std::shared_ptr<const WordBasis> basis) {
    if (x.dim() != basis->dim())
        throw ShapeError("isig: series dimension " + std::to_string(x.dim()) +
                         " does not match word basis dimension " + std::to_string(basis->dim()));
    const auto& sched = basis->schedule();
    const auto& kern = simd::active();
    const std::size_t d = x.dim();

    std::vector<double> state(basis->size() + 1, 0.0);
    state[0] = 1.0;
    std::vector<double> mono(basis->monomial_count() + 1, 0.0);
    mono[0] = 1.0;
    std::vector<double> delta(d);

    const std::size_t max_len = sched.length_offset.size() - 1;
    for (std::size_t j = 0; j + 1 < x.length(); ++j) {
        const auto a = x.point(j), b = x.point(j + 1);
        bool moved = false;
        for (std::size_t i = 0; i < d; ++i) {
            delta[i] = b[i] - a[i];
            moved |= delta[i] != 0.0;
        }
        // A repeated point contributes nothing (time-warping invariance).
        if (!moved) continue;

        for (unsigned deg = 1; deg <= basis->weight_bound(); ++deg) {
            const std::size_t lo = sched.mono_degree_offset[deg - 1];
            const std::size_t hi = sched.mono_degree_offset[deg];
            kern.gather_mul(mono.data() + 1 + lo, mono.data(), sched.mono_parent.data() + lo,
                            delta.data(), sched.mono_var.data() + lo, hi - lo);
        }
        // Longest words first: each group reads prefixes not yet updated at
        // this step, which enforces strictly increasing indices.
        for (std::size_t len = max_len; len >= 1; --len) {
            const std::size_t lo = sched.length_offset[len - 1];
            const std::size_t hi = sched.length_offset[len];
            kern.gather_mul_add(state.data() + 1 + lo, state.data(),
                                sched.word_prefix_slot.data() + lo, mono.data(),
                                sched.word_last_mono_slot.data() + lo, hi - lo);
        }
    }

    std::vector<double> coeffs(basis->size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = state[sched.slot_of_word[i]];
    return ISig(std::move(basis), std::move(coeffs));
}

namespace {

double eval_monomial(const Monomial& m, std::span<const double> v) {
    double r = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) r *= std::pow(v[i], static_cast<int>(m.exponents[i]));
    return r;
}

}  // namespace

ISig isig_bruteforce(const TimeSeries& x, unsigned k) {
    if (x.length() > 12) throw ShapeError("isig_bruteforce: series longer than 12 points");
    auto basis = WordBasis::get(x.dim(), k);
    const std::size_t steps = x.length() - 1;
    std::vector<std::vector<double>> diffs;
    for (std::size_t j = 0; j < steps; ++j) {
        std::vector<double> v(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) v[i] = x.point(j + 1)[i] - x.point(j)[i];
        diffs.push_back(std::move(v));
    }

    std::vector<double> coeffs(basis->size(), 0.0);
    for (std::size_t w = 0; w < basis->size(); ++w) {
        const Word& word = basis->word(w);
        const std::size_t len = word.length();
        if (len > steps) continue;
        std::vector<std::size_t> idx(len);
        for (std::size_t i = 0; i < len; ++i) idx[i] = i;
        double total = 0.0;
        while (true) {
            double term = 1.0;
            for (std::size_t i = 0; i < len; ++i) term *= eval_monomial(word.letters[i], diffs[idx[i]]);
            total += term;
            // Next strictly increasing tuple in lexicographic order.
            std::size_t pos = len;
            while (pos > 0 && idx[pos - 1] == steps - len + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < len; ++i) idx[i] = idx[i - 1] + 1;
        }
        coeffs[w] = total;
    }
    return ISig(std::move(basis), std::move(coeffs));
}

namespace {

void require_same_basis(const ISig& s, const ISig& t) {
    if (s.basis().dim() != t.basis().dim() || s.basis().weight_bound() != t.basis().weight_bound())
        throw ShapeError("signatures use different word bases");
}

}  // namespace

double bw_norm(const ISig& s) {
    const auto c = s.coefficients();
    const auto w = s.basis().bw_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += w[i] * c[i] * c[i];
    return std::sqrt(acc);
}

double bw_distance(const ISig& s, const ISig& t) {
    require_same_basis(s, t);
    const auto w = s.basis().bw_weights();
    return std::sqrt(simd::active().weighted_sq_distance(s.coefficients().data(),
                                                         t.coefficients().data(), w.data(),
                                                         w.size()));
}

double concat_deviation(const TimeSeries& x, const TimeSeries& y, unsigned k) {
    auto basis = WordBasis::get(x.dim(), k);
    const ISig sx = isig(x, basis), sy = isig(y, basis);
    const ISig sxy = isig(shifted_concat(x, y), basis);

    const auto coeff = [&](const ISig& s, std::span<const std::int32_t> ids) {
        return ids.empty() ? 1.0 : s.at(*basis->find_ids(ids));
    };
    double worst = 0.0;
    for (std::size_t w = 0; w < basis->size(); ++w) {
        const auto ids = basis->letter_ids(w);
        double product = 0.0;
        for (std::size_t split = 0; split <= ids.size(); ++split)
            product += coeff(sx, ids.first(split)) * coeff(sy, ids.subspan(split));
        const double dev = std::abs(sxy.at(w) - product) / std::max(1.0, std::abs(product));
        worst = std::max(worst, dev);
    }
    return worst;
}

bool isig_concat_check(const TimeSeries& x, const TimeSeries& y, unsigned k) {
    return concat_deviation(x, y, k) <= 1e-9;
}

}  // namespace dlfm::isig
