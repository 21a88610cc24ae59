#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dlfm::isig {

/// Z_1^{e_1} ... Z_d^{e_d} with total degree >= 1.
struct Monomial {
    std::vector<unsigned> exponents;

    unsigned degree() const noexcept;
    /// Multinomial coefficient deg! / prod e_i!.
    double multinomial() const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// p_1 (x) ... (x) p_l, l >= 1.
struct Word {
    std::vector<Monomial> letters;

    unsigned weight() const noexcept;
    std::size_t length() const noexcept { return letters.size(); }
    /// Product of inverse multinomials of the letters.
    double bw_weight() const;

    friend bool operator==(const Word&, const Word&) = default;
};

/// Canonical order: ascending weight, then ascending length, then letter by
/// letter, letters ordered by exponent vector in descending lexicographic order
/// (Z1^2 before Z1*Z2 before Z1 before Z2^2 before Z2).
bool canonical_less(const Word& a, const Word& b);

/// All words over d variables of weight <= k, canonical order.
std::vector<Word> enumerate_words(std::size_t d, unsigned k);

/// `Z1^2|Z1*Z2`: letters joined by '|', factors by '*'.
std::string label(const Word& w);
std::string label(const Monomial& m);
/// Inverse of label(); dimension must be given since labels omit zero exponents.
Word parse_label(std::string_view text, std::size_t d);

/// Indexed word set for a (d, k) pair together with the evaluation schedule
/// used by the iterated-sums recursion. Immutable once built; shared between
/// signatures of equal shape.
class WordBasis {
public:
    WordBasis(std::size_t d, unsigned k);

    /// Process-wide cache keyed by (d, k).
    static std::shared_ptr<const WordBasis> get(std::size_t d, unsigned k);

    std::size_t dim() const noexcept { return dim_; }
    unsigned weight_bound() const noexcept { return k_; }
    std::size_t size() const noexcept { return words_.size(); }

    const Word& word(std::size_t i) const { return words_[i]; }
    std::span<const Word> words() const noexcept { return words_; }
    std::span<const double> bw_weights() const noexcept { return bw_weights_; }
    std::vector<std::string> labels() const;

    std::optional<std::size_t> find(const Word& w) const;
    /// Word index for a sequence of monomial ids (see monomial()).
    std::optional<std::size_t> find_ids(std::span<const std::int32_t> ids) const;
    /// Monomial ids of word i's letters.
    std::span<const std::int32_t> letter_ids(std::size_t i) const { return letter_ids_[i]; }
    std::size_t monomial_count() const noexcept { return monomials_.size(); }
    const Monomial& monomial(std::size_t id) const { return monomials_[id]; }

    /// Iterated-sums state layout: slot 0 is the empty word (value 1), then
    /// words grouped by length ascending.
    struct Schedule {
        // Monomial values: slot 0 is the constant 1; monomial id m lives in
        // slot m + 1 and equals slot[parent] * delta[var]. Degree groups are
        // contiguous and ascending.
        std::vector<std::int32_t> mono_parent, mono_var;
        std::vector<std::size_t> mono_degree_offset;  // size k + 1, into ids
        // Word slots grouped by length: group l spans [length_offset[l-1], length_offset[l]).
        std::vector<std::int32_t> word_prefix_slot, word_last_mono_slot;
        std::vector<std::size_t> length_offset;
        std::vector<std::size_t> slot_of_word;  // canonical index -> state slot
    };
    const Schedule& schedule() const noexcept { return schedule_; }

private:
    std::size_t dim_;
    unsigned k_;
    std::vector<Word> words_;
    std::vector<double> bw_weights_;
    std::vector<Monomial> monomials_;
    std::vector<std::vector<std::int32_t>> letter_ids_;
    std::map<std::vector<std::int32_t>, std::size_t> index_;
    Schedule schedule_;
};

}  // namespace dlfm::isig
