#include "dlfm/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "dlfm/error.hpp"

namespace dlfm {

TimeSeries embed_on_grid(const Barcode& barcode, std::size_t levels,
                         const std::vector<double>& grid) {
    if (levels == 0) throw ShapeError("embedding needs at least one level");
    if (grid.empty()) return TimeSeries(levels);
    const Landscape lam = pad_levels(landscape(barcode), levels);
    std::vector<double> flat(grid.size() * levels);
    for (std::size_t j = 0; j < grid.size(); ++j)
        lam.evaluate_into(grid[j], std::span<double>(flat.data() + j * levels, levels));
    return TimeSeries(levels, std::move(flat));
}

TimeSeries embed_I(const Barcode& barcode, std::size_t levels) {
    return embed_on_grid(barcode, levels, critical_points(barcode));
}

chen::PWLPath landscape_path(const Barcode& barcode, std::size_t levels) {
    const TimeSeries x = embed_I(barcode, levels);
    std::vector<std::vector<double>> segments;
    if (x.length() < 2) segments.emplace_back(levels, 0.0);
    for (std::size_t j = 0; j + 1 < x.length(); ++j) {
        std::vector<double> s(levels);
        for (std::size_t i = 0; i < levels; ++i) s[i] = x.point(j + 1)[i] - x.point(j)[i];
        segments.push_back(std::move(s));
    }
    return chen::PWLPath(levels, segments);
}

std::vector<double> Corpus::grid_of(const std::vector<CorpusEntry>& entries) {
    std::vector<double> all;
    for (const auto& e : entries) {
        const auto pts = critical_points(e.barcode);
        all.insert(all.end(), pts.begin(), pts.end());
    }
    return dedup_sorted(std::move(all));
}

Corpus::Corpus(std::vector<CorpusEntry> entries, std::size_t levels, unsigned weight)
    : Corpus(entries, grid_of(entries), levels, weight) {}

Corpus::Corpus(std::vector<CorpusEntry> entries, std::vector<double> frozen_grid, std::size_t levels,
               unsigned weight)
    : entries_(std::move(entries)),
      grid_(dedup_sorted(std::move(frozen_grid))),
      levels_(levels),
      weight_(weight) {
    if (levels == 0 || weight == 0) throw ShapeError("corpus needs levels >= 1 and weight >= 1");
    basis_ = isig::WordBasis::get(levels, weight);
}

TimeSeries embed_ID(const Barcode& barcode, const Corpus& corpus) {
    return embed_on_grid(barcode, corpus.levels(), corpus.grid());
}

isig::ISig featurize(const Barcode& barcode, const Corpus& corpus) {
    return isig::isig(embed_ID(barcode, corpus), corpus.basis());
}

isig::ISig featurize_I(const Barcode& barcode, std::size_t levels, unsigned weight) {
    return isig::isig(embed_I(barcode, levels), isig::WordBasis::get(levels, weight));
}

FeatureMatrix feature_matrix(const Corpus& corpus, GridMode mode, unsigned threads) {
    const auto& entries = corpus.entries();
    if (entries.empty()) throw DataError("feature_matrix: corpus is empty");
    FeatureMatrix fm;
    fm.columns = corpus.basis()->labels();
    fm.rows = entries.size();
    fm.cols = fm.columns.size();
    fm.values.assign(fm.rows * fm.cols, 0.0);
    for (const auto& e : entries) fm.ids.push_back(e.id);

    // Rows are independent; each worker writes only its own rows.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < fm.rows;) {
                const isig::ISig s = mode == GridMode::Shared
                                         ? featurize(entries[i].barcode, corpus)
                                         : featurize_I(entries[i].barcode, corpus.levels(), corpus.weight());
                std::copy(s.coefficients().begin(), s.coefficients().end(),
                          fm.values.begin() + static_cast<std::ptrdiff_t>(i * fm.cols));
            }
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(fm.rows);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(fm.rows));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return fm;
}

}  // namespace dlfm
