#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlfm/embedding.hpp"
#include "dlfm/landscape.hpp"
#include "dlfm/timeseries.hpp"

namespace dlfm::io {

/// Shortest round-trip decimal form (%.17g).
std::string format_double(double v);

/// Splits one CSV record; double quotes delimit fields containing commas.
std::vector<std::string> split_csv(const std::string& line);

struct ManifestRow {
    std::string id;
    std::string path;  // resolved against the manifest's directory
    std::string label;
    std::optional<double> depth;
};

/// Manifest CSV with header `id,path,class,depth`; depth may be empty.
std::vector<ManifestRow> read_manifest(const std::string& path);

/// Loads every barcode. All missing or unreadable files are collected into a
/// single DataError before anything is returned.
std::vector<CorpusEntry> load_entries(const std::vector<ManifestRow>& rows);

void write_features(const std::string& path, const FeatureMatrix& m);
FeatureMatrix read_features(const std::string& path);

struct FeatureMeta {
    std::size_t levels = 0;
    unsigned weight = 0;
    std::string grid;  // "shared", "frozen", "per-barcode" or "timeseries"
    std::size_t grid_size = 0;
};
/// Sidecar `<features>.meta.json`.
std::string meta_path(const std::string& features_path);
void write_meta(const std::string& features_path, const FeatureMeta& meta);
std::optional<FeatureMeta> read_meta(const std::string& features_path);

/// Headerless, one point per row.
TimeSeries read_timeseries_csv(const std::string& path);
void write_timeseries_csv(const std::string& path, const TimeSeries& x);

/// `{"span": L, "levels": [[[t, v], ...], ...]}`
std::string landscape_json(const Landscape& l);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace dlfm::io
