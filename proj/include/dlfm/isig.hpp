#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dlfm/timeseries.hpp"
#include "dlfm/words.hpp"

namespace dlfm::isig {

/// Weight-truncated discrete signature. Coefficients follow the basis'
/// canonical word order; the empty-word coefficient is fixed to 1.
class ISig {
public:
    ISig(std::shared_ptr<const WordBasis> basis, std::vector<double> coefficients);

    const WordBasis& basis() const noexcept { return *basis_; }
    std::shared_ptr<const WordBasis> basis_ptr() const noexcept { return basis_; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double empty_word() const noexcept { return 1.0; }
    /// Coefficient of w; throws std::out_of_range if w is outside the basis.
    double operator[](const Word& w) const;
    double at(std::size_t i) const { return coeffs_.at(i); }

    /// True when every non-empty coefficient is zero.
    bool trivial() const noexcept;

private:
    std::shared_ptr<const WordBasis> basis_;
    std::vector<double> coeffs_;
};

/// Single forward pass over the difference series, O(n * #words).
ISig isig(const TimeSeries& x, unsigned k);
ISig isig(const TimeSeries& x, std::shared_ptr<const WordBasis> basis);

/// Direct enumeration over increasing index tuples; length <= 12.
ISig isig_bruteforce(const TimeSeries& x, unsigned k);

double bw_norm(const ISig& s);
double bw_distance(const ISig& s, const ISig& t);

/// Largest deviation between isig({x|y}) and the deconcatenation product
/// sum_{w = u v} <S(x), u><S(y), v>, relative to max(1, |product|).
double concat_deviation(const TimeSeries& x, const TimeSeries& y, unsigned k);
bool isig_concat_check(const TimeSeries& x, const TimeSeries& y, unsigned k);

}  // namespace dlfm::isig
