#include "dlfm/words.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <numeric>

#include "dlfm/error.hpp"

namespace dlfm::isig {

unsigned Monomial::degree() const noexcept {
    return std::accumulate(exponents.begin(), exponents.end(), 0u);
}

double Monomial::multinomial() const {
    double r = 1.0;
    unsigned n = 0;
    for (unsigned e : exponents)
        for (unsigned j = 1; j <= e; ++j) r = r * static_cast<double>(++n) / static_cast<double>(j);
    return r;
}

unsigned Word::weight() const noexcept {
    unsigned w = 0;
    for (const auto& m : letters) w += m.degree();
    return w;
}

double Word::bw_weight() const {
    double w = 1.0;
    for (const auto& m : letters) w /= m.multinomial();
    return w;
}

namespace {

// Descending lexicographic order on exponent vectors.
bool letter_before(const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(),
                                        a.exponents.begin(), a.exponents.end());
}

// All exponent vectors of exact degree `deg` in d variables.
void monomials_of_degree(std::size_t d, unsigned deg, std::vector<Monomial>& out) {
    std::vector<unsigned> e(d, 0);
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i + 1 == d) {
            e[i] = left;
            out.push_back({e});
            return;
        }
        for (unsigned v = left + 1; v-- > 0;) {
            e[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, deg);
}

}  // namespace

bool canonical_less(const Word& a, const Word& b) {
    const unsigned wa = a.weight(), wb = b.weight();
    if (wa != wb) return wa < wb;
    if (a.length() != b.length()) return a.length() < b.length();
    for (std::size_t i = 0; i < a.length(); ++i) {
        if (letter_before(a.letters[i], b.letters[i])) return true;
        if (letter_before(b.letters[i], a.letters[i])) return false;
    }
    return false;
}

std::vector<Word> enumerate_words(std::size_t d, unsigned k) {
    if (d == 0 || k == 0) throw ShapeError("enumerate_words: need d >= 1 and k >= 1");
    std::vector<std::vector<Monomial>> by_degree(k + 1);
    for (unsigned deg = 1; deg <= k; ++deg) monomials_of_degree(d, deg, by_degree[deg]);

    std::vector<Word> words;
    Word cur;
    auto rec = [&](auto&& self, unsigned budget) -> void {
        for (unsigned deg = 1; deg <= budget; ++deg)
            for (const Monomial& m : by_degree[deg]) {
                cur.letters.push_back(m);
                words.push_back(cur);
                self(self, budget - deg);
                cur.letters.pop_back();
            }
    };
    rec(rec, k);
    std::sort(words.begin(), words.end(), canonical_less);
    return words;
}

std::string label(const Monomial& m) {
    std::string s;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (m.exponents[i] == 0) continue;
        if (!s.empty()) s += '*';
        s += 'Z' + std::to_string(i + 1);
        if (m.exponents[i] > 1) s += '^' + std::to_string(m.exponents[i]);
    }
    return s;
}

std::string label(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += '|';
        s += label(w.letters[i]);
    }
    return s;
}

namespace {

unsigned parse_uint(std::string_view s, std::string_view whole) {
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw DataError("bad word label: " + std::string(whole));
    return v;
}

}  // namespace

Word parse_label(std::string_view text, std::size_t d) {
    Word w;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t bar = std::min(text.find('|', start), text.size());
        const std::string_view letter = text.substr(start, bar - start);
        Monomial m{std::vector<unsigned>(d, 0)};
        std::size_t fs = 0;
        while (fs <= letter.size()) {
            const std::size_t star = std::min(letter.find('*', fs), letter.size());
            std::string_view factor = letter.substr(fs, star - fs);
            if (factor.size() < 2 || factor[0] != 'Z')
                throw DataError("bad word label: " + std::string(text));
            const std::size_t caret = factor.find('^');
            const unsigned var = parse_uint(factor.substr(1, caret == std::string_view::npos
                                                                  ? std::string_view::npos
                                                                  : caret - 1),
                                            text);
            const unsigned exp = caret == std::string_view::npos ? 1 : parse_uint(factor.substr(caret + 1), text);
            if (var == 0 || var > d || exp == 0) throw DataError("bad word label: " + std::string(text));
            m.exponents[var - 1] += exp;
            fs = star + 1;
        }
        w.letters.push_back(std::move(m));
        start = bar + 1;
    }
    return w;
}

WordBasis::WordBasis(std::size_t d, unsigned k) : dim_(d), k_(k), words_(enumerate_words(d, k)) {
    // Monomial ids: degree ascending, descending lex within a degree.
    for (unsigned deg = 1; deg <= k; ++deg) monomials_of_degree(d, deg, monomials_);
    std::map<std::vector<unsigned>, std::int32_t> mono_id;
    for (std::size_t i = 0; i < monomials_.size(); ++i)
        mono_id[monomials_[i].exponents] = static_cast<std::int32_t>(i);

    bw_weights_.reserve(words_.size());
    letter_ids_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        bw_weights_.push_back(words_[i].bw_weight());
        std::vector<std::int32_t> ids;
        for (const auto& m : words_[i].letters) ids.push_back(mono_id.at(m.exponents));
        index_.emplace(ids, i);
        letter_ids_.push_back(std::move(ids));
    }

    Schedule& s = schedule_;
    s.mono_degree_offset.assign(k + 1, 0);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
        std::vector<unsigned> e = monomials_[i].exponents;
        const std::size_t var = static_cast<std::size_t>(
            std::find_if(e.begin(), e.end(), [](unsigned v) { return v > 0; }) - e.begin());
        --e[var];
        const bool constant = std::all_of(e.begin(), e.end(), [](unsigned v) { return v == 0; });
        s.mono_parent.push_back(constant ? 0 : mono_id.at(e) + 1);
        s.mono_var.push_back(static_cast<std::int32_t>(var));
        s.mono_degree_offset[monomials_[i].degree()] = i + 1;
    }
    for (unsigned deg = 1; deg <= k; ++deg)
        s.mono_degree_offset[deg] = std::max(s.mono_degree_offset[deg], s.mono_degree_offset[deg - 1]);

    // Stable grouping by length keeps canonical order inside each group.
    std::vector<std::size_t> order(words_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return words_[a].length() < words_[b].length();
    });
    s.slot_of_word.assign(words_.size(), 0);
    for (std::size_t p = 0; p < order.size(); ++p) s.slot_of_word[order[p]] = p + 1;
    std::size_t max_len = words_.empty() ? 0 : words_[order.back()].length();
    s.length_offset.assign(max_len + 1, 0);
    for (std::size_t p = 0; p < order.size(); ++p) {
        const auto& ids = letter_ids_[order[p]];
        const std::size_t len = ids.size();
        std::int32_t prefix_slot = 0;
        if (len > 1) {
            const std::vector<std::int32_t> prefix(ids.begin(), ids.end() - 1);
            prefix_slot = static_cast<std::int32_t>(s.slot_of_word[index_.at(prefix)]);
        }
        s.word_prefix_slot.push_back(prefix_slot);
        s.word_last_mono_slot.push_back(ids.back() + 1);
        s.length_offset[len] = p + 1;
    }
}

std::shared_ptr<const WordBasis> WordBasis::get(std::size_t d, unsigned k) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const WordBasis>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{d, k}];
    if (!slot) slot = std::make_shared<const WordBasis>(d, k);
    return slot;
}

std::vector<std::string> WordBasis::labels() const {
    std::vector<std::string> out;
    out.reserve(words_.size());
    for (const auto& w : words_) out.push_back(label(w));
    return out;
}

std::optional<std::size_t> WordBasis::find_ids(std::span<const std::int32_t> ids) const {
    const auto it = index_.find(std::vector<std::int32_t>(ids.begin(), ids.end()));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> WordBasis::find(const Word& w) const {
    std::vector<std::int32_t> ids;
    for (const auto& m : w.letters) {
        if (m.exponents.size() != dim_) return std::nullopt;
        const auto it = std::find(monomials_.begin(), monomials_.end(), m);
        if (it == monomials_.end()) return std::nullopt;
        ids.push_back(static_cast<std::int32_t>(it - monomials_.begin()));
    }
    return find_ids(ids);
}

}  // namespace dlfm::isig
