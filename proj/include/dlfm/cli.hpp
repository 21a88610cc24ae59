#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlfm/embedding.hpp"

namespace dlfm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

/// Entry point of the `dlfm` tool; never throws.
int run(int argc, const char* const* argv);

struct SynthOptions {
    std::size_t classes = 3;
    std::size_t per_class = 30;
    std::uint64_t seed = 0;
};

/// Labelled synthetic barcodes: eight bars per barcode with lengths within
/// 10% of 2^c for class c, laid out left to right over a common window.
/// Endpoints lie on a 0.1 lattice so corpus grids stay small. The depth
/// column is the mean bar length.
std::vector<CorpusEntry> synth_corpus(const SynthOptions& opt);

/// Writes `<dir>/barcodes/<id>.json` and `<dir>/manifest.csv`; returns the
/// manifest path.
std::string write_corpus(const std::string& dir, const std::vector<CorpusEntry>& entries);

}  // namespace dlfm::cli
