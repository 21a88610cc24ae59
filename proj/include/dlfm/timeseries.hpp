#pragma once

#include <span>
#include <vector>

namespace dlfm {

/// n >= 1 points in R^d, stored point-major (point j occupies [j*d, (j+1)*d)).
class TimeSeries {
public:
    /// The singleton zero series {0} in R^d.
    explicit TimeSeries(std::size_t dim);
    TimeSeries(std::size_t dim, std::vector<double> flat);
    /// Throws ShapeError on ragged or empty input.
    static TimeSeries from_points(const std::vector<std::vector<double>>& points);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t length() const noexcept { return data_.size() / dim_; }
    std::span<const double> point(std::size_t j) const noexcept {
        return {data_.data() + j * dim_, dim_};
    }
    std::span<const double> flat() const noexcept { return data_; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// Collapses runs of equal consecutive points.
TimeSeries twr_reduce(const TimeSeries& x);

/// Subtracts y from every point.
TimeSeries time_translate(const TimeSeries& x, std::span<const double> y);

/// {x|y}: x, then y shifted so that y_1 lands on x_n (length n + m).
TimeSeries shifted_concat(const TimeSeries& x, const TimeSeries& y);

/// (x_2 - x_1, ..., x_n - x_{n-1}); requires n >= 2.
TimeSeries difference_series(const TimeSeries& x);

/// max_i ||x_i - y_i||_2 over series of equal shape.
double ts_distance(const TimeSeries& x, const TimeSeries& y);

/// Right-multiplication of the d x n matrix [x_1 | ... | x_n] by one of the
/// time-warping / translation operators. Positions are 0-based point indices.
enum class WarpOp {
    Translation,  // columns become x_j - x_1
    Extension,    // duplicate point `position`
    Contraction,  // drop point `position + 1`, which must equal point `position`
    Delta,        // consecutive differences
};

struct WarpOperator {
    WarpOp op;
    std::size_t position = 0;
};

TimeSeries apply_operator(const TimeSeries& x, WarpOperator op);

}  // namespace dlfm
