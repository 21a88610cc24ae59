#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dlfm/cli.hpp"
#include "dlfm/error.hpp"
#include "dlfm/rng.hpp"
#include "dlfm/table_io.hpp"

namespace dlfm::cli {

namespace {

double lattice(double v) { return std::round(v * 10.0) / 10.0; }

double class_scale(std::size_t c) { return std::pow(2.0, static_cast<double>(c)); }

}  // namespace

std::vector<CorpusEntry> synth_corpus(const SynthOptions& opt) {
    if (opt.classes == 0 || opt.per_class == 0) throw ShapeError("synth: classes and per-class must be >= 1");
    std::vector<CorpusEntry> out;
    constexpr std::size_t n_bars = 8;
    // Every class spreads its bars over the same window, so the shared grid
    // has comparable density wherever any barcode has support.
    const double slot = 1.25 * class_scale(opt.classes - 1);
    std::size_t index = 0;
    for (std::size_t c = 0; c < opt.classes; ++c) {
        const double scale = class_scale(c);
        for (std::size_t m = 0; m < opt.per_class; ++m, ++index) {
            SplitMix64 rng = SplitMix64::substream(opt.seed, index);
            std::vector<Bar> bars;
            double total = 0.0;
            double cursor = lattice(rng.uniform(0.0, slot - scale));
            for (std::size_t b = 0; b < n_bars; ++b) {
                const double length = std::max(0.1, lattice(scale * (0.9 + 0.2 * rng.uniform())));
                bars.push_back({cursor, lattice(cursor + length)});
                total += bars.back().death - cursor;
                cursor = lattice(bars.back().death + (slot - length) * rng.uniform(0.5, 1.5));
            }
            char id[32];
            std::snprintf(id, sizeof id, "c%zu_%03zu", c, m);
            out.push_back({id, Barcode(std::move(bars)), "class" + std::to_string(c),
                           total / static_cast<double>(n_bars)});
        }
    }
    return out;
}

std::string write_corpus(const std::string& dir, const std::vector<CorpusEntry>& entries) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "barcodes");
    std::string manifest = "id,path,class,depth\n";
    for (const auto& e : entries) {
        const std::string rel = "barcodes/" + e.id + ".json";
        io::write_text((fs::path(dir) / rel).string(), to_json(e.barcode));
        manifest += e.id + "," + rel + "," + e.label + "," + (e.depth ? io::format_double(*e.depth) : "") + "\n";
    }
    const std::string path = (fs::path(dir) / "manifest.csv").string();
    io::write_text(path, manifest);
    return path;
}

}  // namespace dlfm::cli
