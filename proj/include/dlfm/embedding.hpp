#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlfm/barcode.hpp"
#include "dlfm/chen.hpp"
#include "dlfm/isig.hpp"
#include "dlfm/landscape.hpp"
#include "dlfm/timeseries.hpp"

namespace dlfm {

inline constexpr std::size_t kDefaultLevels = 15;
inline constexpr unsigned kDefaultWeight = 3;

/// Landscape of B, padded to d levels, evaluated at B's own critical points.
/// The empty barcode maps to the singleton zero series.
TimeSeries embed_I(const Barcode& barcode, std::size_t levels);

/// Padded landscape of B evaluated on an arbitrary sorted grid.
TimeSeries embed_on_grid(const Barcode& barcode, std::size_t levels,
                         const std::vector<double>& grid);

/// The landscape as a piecewise-linear path in R^d (segments between
/// consecutive critical points).
chen::PWLPath landscape_path(const Barcode& barcode, std::size_t levels);

struct CorpusEntry {
    std::string id;
    Barcode barcode;
    std::string label;
    std::optional<double> depth;
};

/// Finite barcode domain with the shared grid C_D (sorted, 1e-12-deduplicated
/// union of member critical points).
class Corpus {
public:
    Corpus(std::vector<CorpusEntry> entries, std::size_t levels = kDefaultLevels,
           unsigned weight = kDefaultWeight);
    /// Same entries, grid frozen from another corpus (guest featurization).
    Corpus(std::vector<CorpusEntry> entries, std::vector<double> frozen_grid, std::size_t levels,
           unsigned weight);

    const std::vector<CorpusEntry>& entries() const noexcept { return entries_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    std::size_t levels() const noexcept { return levels_; }
    unsigned weight() const noexcept { return weight_; }
    std::shared_ptr<const isig::WordBasis> basis() const { return basis_; }

    static std::vector<double> grid_of(const std::vector<CorpusEntry>& entries);

private:
    std::vector<CorpusEntry> entries_;
    std::vector<double> grid_;
    std::size_t levels_;
    unsigned weight_;
    std::shared_ptr<const isig::WordBasis> basis_;
};

/// Padded landscape of B on the corpus grid (length |C_D|; the singleton zero
/// series when the grid is empty).
TimeSeries embed_ID(const Barcode& barcode, const Corpus& corpus);

/// Discrete landscape feature map on the shared grid.
isig::ISig featurize(const Barcode& barcode, const Corpus& corpus);
/// Per-barcode grid variant.
isig::ISig featurize_I(const Barcode& barcode, std::size_t levels, unsigned weight);

enum class GridMode { Shared, PerBarcode };

struct FeatureMatrix {
    std::vector<std::string> ids;
    std::vector<std::string> columns;  // canonical word labels
    std::size_t rows = 0, cols = 0;
    std::vector<double> values;        // row-major

    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

/// One row per entry in corpus order; rows are computed in parallel.
FeatureMatrix feature_matrix(const Corpus& corpus, GridMode mode = GridMode::Shared,
                             unsigned threads = 0);

}  // namespace dlfm
