#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dlfm {

/// A birth-death interval of a tame barcode.
struct Bar {
    double birth = 0.0;
    double death = 0.0;

    double persistence() const noexcept { return death - birth; }
    /// Bars on the diagonal carry no landscape mass.
    bool trivial() const noexcept { return death == birth; }

    friend auto operator<=>(const Bar&, const Bar&) = default;
};

/// Finite multiset of bars kept in canonical (birth, death) order.
class Barcode {
public:
    Barcode() = default;
    /// Validates and sorts. Throws DataError on death < birth or birth < 0.
    explicit Barcode(std::vector<Bar> bars);

    std::span<const Bar> bars() const noexcept { return bars_; }
    std::size_t size() const noexcept { return bars_.size(); }
    bool empty() const noexcept { return bars_.empty(); }
    /// max death over bars, 0 for the empty barcode.
    double span() const noexcept { return span_; }
    std::size_t trivial_count() const noexcept;

    friend bool operator==(const Barcode&, const Barcode&) = default;

private:
    std::vector<Bar> bars_;
    double span_ = 0.0;
};

/// Parses `{"bars": [[b, d], ...]}`. Errors are ParseError with a line number.
Barcode parse_barcode(std::string_view text);
Barcode read_barcode_file(const std::string& path);
std::string to_json(const Barcode& barcode);

/// Bottleneck distance in the sup-norm; unmatched bars go to the diagonal at
/// cost persistence/2.
double bottleneck_distance(const Barcode& a, const Barcode& b);

}  // namespace dlfm
