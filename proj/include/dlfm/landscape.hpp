#pragma once

#include <span>
#include <vector>

#include "dlfm/barcode.hpp"

namespace dlfm {

struct CriticalPair {
    double t = 0.0;
    double value = 0.0;

    friend bool operator==(const CriticalPair&, const CriticalPair&) = default;
};

/// One landscape level, kept as its slope-change points. The first and last
/// pairs have value 0; outside them the level vanishes. An empty list is the
/// identically-zero level.
class Level {
public:
    Level() = default;
    explicit Level(std::vector<CriticalPair> pairs) : pairs_(std::move(pairs)) {}

    std::span<const CriticalPair> pairs() const noexcept { return pairs_; }
    bool identically_zero() const noexcept { return pairs_.empty(); }
    double operator()(double t) const noexcept;

    friend bool operator==(const Level&, const Level&) = default;

private:
    std::vector<CriticalPair> pairs_;
};

class Landscape {
public:
    Landscape() = default;
    Landscape(std::vector<Level> levels, double span) : levels_(std::move(levels)), span_(span) {}

    std::span<const Level> levels() const noexcept { return levels_; }
    std::size_t depth() const noexcept { return levels_.size(); }
    double span() const noexcept { return span_; }

    /// Value of every level at t; 0 outside [0, span].
    std::vector<double> evaluate(double t) const;
    /// Writes depth() values into out.
    void evaluate_into(double t, std::span<double> out) const;

    friend bool operator==(const Landscape&, const Landscape&) = default;

private:
    std::vector<Level> levels_;
    double span_ = 0.0;
};

/// Sorted, deduplicated (1e-12) superset of the landscape's critical t-values:
/// endpoints, midpoints and crossing midpoints (b_j + d_i)/2 of overlapping
/// pairs b_i <= b_j < d_i <= d_j. Trivial bars contribute nothing.
std::vector<double> critical_points(const Barcode& barcode);

/// Sorted merge of t-values with the same 1e-12 deduplication.
std::vector<double> dedup_sorted(std::vector<double> values);

Landscape landscape(const Barcode& barcode);

/// Exactly d levels: zero levels appended, or the highest-index levels dropped.
Landscape pad_levels(const Landscape& landscape, std::size_t d);

}  // namespace dlfm
