#pragma once

#include <span>
#include <vector>

namespace dlfm::chen {

/// Truncated element of the tensor algebra over R^d: dense levels T^(0..M),
/// level k stored row-major with d^k entries.
class TensorSeries {
public:
    TensorSeries(std::size_t dim, std::size_t max_order);
    /// (1, 0, 0, ...)
    static TensorSeries unit(std::size_t dim, std::size_t max_order);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t max_order() const noexcept { return levels_.size() - 1; }

    std::span<double> level(std::size_t k) { return levels_[k]; }
    std::span<const double> level(std::size_t k) const { return levels_[k]; }

    double& at(std::size_t k, std::span<const std::size_t> index);

    TensorSeries& operator+=(const TensorSeries& other);
    TensorSeries& operator-=(const TensorSeries& other);
    TensorSeries& operator*=(double c);

    /// Largest absolute entry over levels 1..max_order (level 0 included when
    /// `include_scalar`).
    double max_abs(bool include_scalar = false) const;

private:
    std::size_t dim_;
    std::vector<std::vector<double>> levels_;
};

/// Graded product, truncated at max_order.
TensorSeries tensor_mul(const TensorSeries& a, const TensorSeries& b);

/// (1, a, a^2/2!, ..., a^M/M!): signature of the segment t -> t a.
TensorSeries tensor_exp(std::span<const double> a, std::size_t max_order);

/// exp of a series with vanishing scalar part.
TensorSeries tensor_exp_series(const TensorSeries& n);

/// log(1 + N) = N - N^2/2 + N^3/3 - ...; requires T^(0) = 1.
TensorSeries tensor_log(const TensorSeries& a);

/// Piecewise-linear path stored by its minimal segment decomposition: zero
/// segments dropped, consecutive positively parallel segments merged.
class PWLPath {
public:
    PWLPath(std::size_t dim, const std::vector<std::vector<double>>& segments);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return segments_.size(); }
    std::span<const double> segment(std::size_t j) const noexcept {
        return {segments_[j].data(), dim_};
    }
    /// Sum of segments.
    std::vector<double> displacement() const;

private:
    std::size_t dim_;
    std::vector<std::vector<double>> segments_;
};

/// exp(a_1) (x) ... (x) exp(a_m), truncated at max_order >= 1.
TensorSeries pwl_signature(const PWLPath& path, std::size_t max_order);

/// Concatenation of paths (segment lists joined, then re-normalized).
PWLPath concat(const PWLPath& a, const PWLPath& b);

struct MatrixParts {
    std::size_t dim = 0;
    std::vector<double> sym;   // row-major d x d
    std::vector<double> skew;  // row-major d x d
};

/// Symmetric / skew split of T^(2).
MatrixParts signature_matrix_parts(const TensorSeries& a);

/// 1/2 sum_{i<j} a_i ^ a_j with a ^ b = a(x)b - b(x)a, row-major d x d.
std::vector<double> half_wedge_sum(const PWLPath& path);

struct LoopReport {
    bool is_loop = false;            // all four conditions hold
    bool displacement_zero = false;  // (1) sum a_j = 0
    bool level1_vanishes = false;    // (2) sigma^(1) = logsigma^(1) = 0
    bool level2_wedge = false;       // (3) sigma^(2) = logsigma^(2) = 1/2 sum a_i ^ a_j
    bool level3_log = false;         // (4) sigma^(3) = logsigma^(3)
    bool consistent = false;         // the four conditions agree
};

/// Evaluates the four equivalent loop conditions, each to absolute tolerance.
LoopReport loop_diagnostics(const PWLPath& path, double tol);

}  // namespace dlfm::chen
