#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlfm/analysis.hpp"
#include "dlfm/cli.hpp"
#include "dlfm/error.hpp"
#include "dlfm/svg.hpp"
#include "dlfm/table_io.hpp"

namespace dlfm::cli {

namespace fs = std::filesystem;
using analysis::MatrixView;
using analysis::Score;

namespace {

struct Globals {
    std::size_t levels = kDefaultLevels;
    unsigned weight = kDefaultWeight;
    std::size_t clusters = 3;
    std::uint64_t seed = 0;
    std::size_t permutations = 1000;
    std::string out;
};

/// Thrown for a well-formed command line with inconsistent arguments.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An output self-check failed.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text;
    else
        io::write_text(g.out, text);
}

std::string require_out(const Globals& g, const char* what) {
    if (g.out.empty()) throw UsageError(std::string("--out is required for ") + what);
    return g.out;
}

MatrixView view(const FeatureMatrix& m) { return {m.values, m.rows, m.cols}; }

/// Features and manifest joined on id; rows keep feature order.
struct LabelledFeatures {
    FeatureMatrix features;
    analysis::Labeling labels;
    std::vector<std::string> classes;
    std::vector<std::optional<double>> depth;
};

LabelledFeatures join(const std::string& features_path, const std::string& manifest_path) {
    LabelledFeatures lf{io::read_features(features_path), {}, {}, {}};
    const auto rows = io::read_manifest(manifest_path);
    std::map<std::string, const io::ManifestRow*> by_id;
    for (const auto& r : rows) by_id.emplace(r.id, &r);

    std::vector<std::string> unknown, unused;
    std::set<std::string> seen;
    std::vector<std::string> names;
    for (const auto& id : lf.features.ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            unknown.push_back(id);
            continue;
        }
        seen.insert(id);
        names.push_back(it->second->label);
        lf.depth.push_back(it->second->depth);
    }
    for (const auto& r : rows)
        if (!seen.count(r.id)) unused.push_back(r.id);
    if (!unknown.empty() || !unused.empty()) {
        std::string msg = "feature ids and manifest ids differ";
        if (!unknown.empty()) {
            msg += "\n  not in manifest:";
            for (const auto& id : unknown) msg += " " + id;
        }
        if (!unused.empty()) {
            msg += "\n  not in features:";
            for (const auto& id : unused) msg += " " + id;
        }
        throw DataError(msg);
    }
    lf.labels = analysis::encode_labels(names, &lf.classes);
    return lf;
}

std::size_t label_dimension(const std::string& features_path, const FeatureMatrix& m) {
    if (const auto meta = io::read_meta(features_path)) return meta->levels;
    std::size_t d = 0;
    for (const auto& c : m.columns)
        for (std::size_t at = c.find('Z'); at != std::string::npos; at = c.find('Z', at + 1))
            d = std::max<std::size_t>(d, std::stoul(c.substr(at + 1)));
    return d;
}

analysis::KMeansOptions kmeans_options(const std::string& features_path, const FeatureMatrix& m,
                                       bool bw_geometry) {
    analysis::KMeansOptions opt;
    if (!bw_geometry) return opt;
    const std::size_t d = label_dimension(features_path, m);
    for (const auto& c : m.columns) opt.column_weights.push_back(isig::parse_label(c, d).bw_weight());
    return opt;
}

std::string stats_header() { return "statistic,value,p_value,permutations\n"; }

std::string stats_row(const std::string& name, double value, std::optional<analysis::StatResult> r = {}) {
    std::string s = name + "," + io::format_double(value);
    if (r)
        s += "," + io::format_double(r->p_value) + "," + std::to_string(r->permutations);
    else
        s += ",,";
    return s + "\n";
}

std::string assignments_csv(const FeatureMatrix& m, const analysis::Labeling& labels) {
    std::string s = "id,cluster\n";
    for (std::size_t i = 0; i < m.rows; ++i) s += m.ids[i] + "," + std::to_string(labels[i]) + "\n";
    return s;
}

std::vector<double> first_two(const analysis::PcaResult& p, std::size_t rows) {
    std::vector<double> xy(2 * rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < std::min<std::size_t>(2, p.n_components); ++k)
            xy[2 * i + k] = p.projected[i * p.n_components + k];
    return xy;
}

// ---- subcommands ---------------------------------------------------------

int cmd_landscape(const Globals& g, const std::string& barcode_path, const std::string& svg_path) {
    const Landscape l = landscape(read_barcode_file(barcode_path));
    emit(g, io::landscape_json(l));
    if (!svg_path.empty()) io::write_text(svg_path, svg::landscape_plot(l, fs::path(barcode_path).stem().string()));
    return kOk;
}

struct FeaturizeArgs {
    std::string manifest, grid_from, embedding = "ID", timeseries;
    unsigned threads = 0;
};

int cmd_featurize(const Globals& g, const FeaturizeArgs& a) {
    const std::string out = require_out(g, "featurize");
    if (a.manifest.empty() == a.timeseries.empty())
        throw UsageError("featurize needs exactly one of --manifest or --from-timeseries");

    if (!a.timeseries.empty()) {
        const TimeSeries x = io::read_timeseries_csv(a.timeseries);
        const auto basis = isig::WordBasis::get(x.dim(), g.weight);
        const isig::ISig s = isig::isig(x, basis);
        FeatureMatrix m;
        m.ids = {fs::path(a.timeseries).stem().string()};
        m.columns = basis->labels();
        m.rows = 1;
        m.cols = m.columns.size();
        m.values.assign(s.coefficients().begin(), s.coefficients().end());
        io::write_features(out, m);
        io::write_meta(out, {x.dim(), g.weight, "timeseries", x.length()});
        return kOk;
    }

    const GridMode mode = a.embedding == "I" ? GridMode::PerBarcode : GridMode::Shared;
    if (mode == GridMode::PerBarcode && !a.grid_from.empty())
        throw UsageError("--grid-from applies to the shared-grid embedding only");
    // Everything is loaded and validated before the first byte is written.
    auto entries = io::load_entries(io::read_manifest(a.manifest));
    std::string grid_kind = mode == GridMode::Shared ? "shared" : "per-barcode";
    std::optional<Corpus> corpus;
    if (!a.grid_from.empty()) {
        const auto host = io::load_entries(io::read_manifest(a.grid_from));
        corpus.emplace(std::move(entries), Corpus::grid_of(host), g.levels, g.weight);
        grid_kind = "frozen";
    } else {
        corpus.emplace(std::move(entries), g.levels, g.weight);
    }
    const FeatureMatrix m = feature_matrix(*corpus, mode, a.threads);
    io::write_features(out, m);
    io::write_meta(out, {g.levels, g.weight, grid_kind, mode == GridMode::Shared ? corpus->grid().size() : 0});
    return kOk;
}

int cmd_cluster(const Globals& g, const std::string& features_path, bool bw_geometry) {
    const FeatureMatrix m = io::read_features(features_path);
    const auto res = analysis::kmeans(view(m), g.clusters, g.seed, kmeans_options(features_path, m, bw_geometry));
    emit(g, assignments_csv(m, res.labels));
    return kOk;
}

struct StatArgs {
    std::string features, manifest, score = "ari", svg;
    bool bw_geometry = false;
};

int cmd_permtest(const Globals& g, const StatArgs& a) {
    const LabelledFeatures lf = join(a.features, a.manifest);
    const Score score = analysis::parse_score(a.score);
    const auto r = analysis::permutation_test(view(lf.features), lf.labels, score, g.permutations, g.seed,
                                              g.clusters, kmeans_options(a.features, lf.features, a.bw_geometry));
    emit(g, stats_header() + stats_row(analysis::to_string(score), r.statistic, r));
    if (!a.svg.empty())
        io::write_text(a.svg, svg::histogram_plot(r.null_distribution, r.statistic,
                                                  "permutation test (" + analysis::to_string(score) + ")"));
    return kOk;
}

int cmd_pca(const Globals& g, const std::string& features_path, const std::string& manifest,
            std::size_t components, const std::string& svg_path) {
    FeatureMatrix m;
    analysis::Labeling labels;
    std::vector<std::string> classes;
    if (manifest.empty()) {
        m = io::read_features(features_path);
        labels.assign(m.rows, 0);
    } else {
        LabelledFeatures lf = join(features_path, manifest);
        m = std::move(lf.features);
        labels = std::move(lf.labels);
        classes = std::move(lf.classes);
    }
    const auto p = analysis::pca(view(m), components);
    std::string s = "id";
    for (std::size_t k = 0; k < p.n_components; ++k) s += ",PC" + std::to_string(k + 1);
    s += "\n";
    for (std::size_t i = 0; i < m.rows; ++i) {
        s += m.ids[i];
        for (std::size_t k = 0; k < p.n_components; ++k) s += "," + io::format_double(p.projected[i * p.n_components + k]);
        s += "\n";
    }
    s += "# explained_variance";
    for (double v : p.explained_variance) s += "," + io::format_double(v);
    s += "\n# total_variance," + io::format_double(p.total_variance) + "\n";
    emit(g, s);
    if (!svg_path.empty()) io::write_text(svg_path, svg::scatter_plot(first_two(p, m.rows), labels, classes, "PCA"));
    return kOk;
}

int cmd_chen_check(const Globals& g, const std::string& barcode_path, double tol) {
    const chen::PWLPath path = landscape_path(read_barcode_file(barcode_path), g.levels);
    const chen::LoopReport r = chen::loop_diagnostics(path, tol);
    nlohmann::ordered_json j;
    j["levels"] = g.levels;
    j["segments"] = path.size();
    j["is_loop"] = r.is_loop;
    j["displacement_zero"] = r.displacement_zero;
    j["level1_vanishes"] = r.level1_vanishes;
    j["level2_wedge"] = r.level2_wedge;
    j["level3_log"] = r.level3_log;
    j["consistent"] = r.consistent;
    emit(g, j.dump(2) + "\n");
    // Landscapes start and end at zero, so every landscape path is a loop.
    if (!r.consistent || !r.is_loop) throw InvariantError("loop conditions disagree on a landscape path");
    return kOk;
}

int cmd_synth(const Globals& g, std::size_t classes, std::size_t per_class) {
    const std::string dir = require_out(g, "synth");
    const std::string manifest = write_corpus(dir, synth_corpus({classes, per_class, g.seed}));
    std::cout << manifest << "\n";
    return kOk;
}

struct AnalyzeArgs : StatArgs {
    std::string spearman;
    std::vector<std::string> scores;
};

int cmd_analyze(const Globals& g, const AnalyzeArgs& a) {
    const std::string dir = require_out(g, "analyze");
    const LabelledFeatures lf = join(a.features, a.manifest);
    if (!a.spearman.empty() && a.spearman != "depth")
        throw UsageError("--spearman supports the manifest column 'depth' only");
    std::vector<double> depth;
    if (!a.spearman.empty()) {
        for (std::size_t i = 0; i < lf.depth.size(); ++i) {
            if (!lf.depth[i]) throw DataError("--spearman depth: no depth value for id " + lf.features.ids[i]);
            depth.push_back(*lf.depth[i]);
        }
    }
    const MatrixView x = view(lf.features);
    const auto opt = kmeans_options(a.features, lf.features, a.bw_geometry);
    const auto km = analysis::kmeans(x, g.clusters, g.seed, opt);

    std::vector<Score> scores;
    for (const auto& s : a.scores.empty() ? std::vector<std::string>{"ari", "nmi", "separation"} : a.scores)
        scores.push_back(analysis::parse_score(s));

    std::string stats = stats_header();
    std::map<Score, analysis::StatResult> tested;
    for (Score s : scores) {
        const auto r = analysis::permutation_test(x, lf.labels, s, g.permutations, g.seed, g.clusters, opt);
        io::write_text((fs::path(dir) / ("permutation_" + analysis::to_string(s) + ".svg")).string(),
                       svg::histogram_plot(r.null_distribution, r.statistic,
                                           "permutation test (" + analysis::to_string(s) + ")"));
        tested.emplace(s, r);
    }
    const auto row = [&](Score s, double value) {
        const auto it = tested.find(s);
        stats += it == tested.end() ? stats_row(analysis::to_string(s), value)
                                    : stats_row(analysis::to_string(s), value, it->second);
    };
    row(Score::Ari, analysis::ari(km.labels, lf.labels));
    row(Score::Nmi, analysis::nmi(km.labels, lf.labels));
    row(Score::Separation, analysis::separation_ratio(x, lf.labels));
    if (!depth.empty()) {
        const auto r = analysis::spearman(depth, [&] {
            // Distance from the origin of the feature space as the scalar summary.
            std::vector<double> norms;
            for (std::size_t i = 0; i < lf.features.rows; ++i) {
                double s = 0.0;
                for (double v : lf.features.row(i)) s += v * v;
                norms.push_back(std::sqrt(s));
            }
            return norms;
        }(), g.permutations, g.seed);
        stats += stats_row("spearman_depth", r.statistic, r);
    }
    stats += stats_row("inertia", km.inertia);

    io::write_text((fs::path(dir) / "stats.csv").string(), stats);
    io::write_text((fs::path(dir) / "assignments.csv").string(), assignments_csv(lf.features, km.labels));
    const auto p = analysis::pca(x, std::min<std::size_t>({3, x.rows, x.cols}));
    io::write_text((fs::path(dir) / "pca.svg").string(),
                   svg::scatter_plot(first_two(p, x.rows), lf.labels, lf.classes, "PCA by class"));
    std::cout << stats;
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"dlfm: discrete landscape features of persistence barcodes"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--levels", g.levels, "landscape levels d")->check(CLI::PositiveNumber);
    app.add_option("--weight", g.weight, "signature weight bound k")->check(CLI::PositiveNumber);
    app.add_option("--clusters", g.clusters, "k-means clusters")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--permutations", g.permutations, "permutation replicates")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output file or directory");

    std::function<int()> action;

    auto* land = app.add_subcommand("landscape", "critical pairs of a barcode's landscape");
    std::string barcode_path, svg_path;
    land->add_option("barcode", barcode_path, "barcode JSON")->required();
    land->add_option("--svg", svg_path, "also write an SVG plot");
    land->callback([&] { action = [&] { return cmd_landscape(g, barcode_path, svg_path); }; });

    auto* feat = app.add_subcommand("featurize", "discrete landscape features of a manifest");
    FeaturizeArgs fa;
    feat->add_option("--manifest", fa.manifest, "manifest CSV (id,path,class,depth)");
    feat->add_option("--grid-from", fa.grid_from, "take the grid from another manifest");
    feat->add_option("--embedding", fa.embedding, "ID (shared grid) or I (per-barcode grid)")
        ->check(CLI::IsMember({"ID", "I"}));
    feat->add_option("--from-timeseries", fa.timeseries, "featurize a headerless time-series CSV");
    feat->add_option("--threads", fa.threads, "worker threads (0: hardware)");
    feat->callback([&] { action = [&] { return cmd_featurize(g, fa); }; });

    auto* clus = app.add_subcommand("cluster", "k-means assignments");
    std::string features_path;
    bool bw_geometry = false;
    clus->add_option("--features", features_path, "feature CSV")->required();
    clus->add_flag("--bw-geometry", bw_geometry, "Bombieri-Weyl weighted distances");
    clus->callback([&] { action = [&] { return cmd_cluster(g, features_path, bw_geometry); }; });

    auto* perm = app.add_subcommand("permtest", "permutation test of a score");
    StatArgs pa;
    perm->add_option("--features", pa.features, "feature CSV")->required();
    perm->add_option("--manifest", pa.manifest, "manifest with class labels")->required();
    perm->add_option("--score", pa.score, "ari, nmi or separation")
        ->check(CLI::IsMember({"ari", "nmi", "separation"}));
    perm->add_option("--svg", pa.svg, "histogram of the null distribution");
    perm->add_flag("--bw-geometry", pa.bw_geometry, "Bombieri-Weyl weighted distances");
    perm->callback([&] { action = [&] { return cmd_permtest(g, pa); }; });

    auto* pcac = app.add_subcommand("pca", "principal component projection");
    std::string pca_manifest, pca_svg;
    std::size_t components = 3;
    pcac->add_option("--features", features_path, "feature CSV")->required();
    pcac->add_option("--manifest", pca_manifest, "colour points by class");
    pcac->add_option("--components", components, "number of components")->check(CLI::PositiveNumber);
    pcac->add_option("--svg", pca_svg, "scatter plot of PC1/PC2");
    pcac->callback([&] { action = [&] { return cmd_pca(g, features_path, pca_manifest, components, pca_svg); }; });

    auto* chk = app.add_subcommand("chen-check", "loop diagnostics of a landscape path");
    double tol = 1e-9;
    chk->add_option("barcode", barcode_path, "barcode JSON")->required();
    chk->add_option("--tol", tol, "absolute tolerance")->check(CLI::PositiveNumber);
    chk->callback([&] { action = [&] { return cmd_chen_check(g, barcode_path, tol); }; });

    auto* syn = app.add_subcommand("synth", "labelled synthetic barcode corpus");
    std::size_t classes = 3, per_class = 30;
    syn->add_option("--classes", classes, "number of classes")->check(CLI::PositiveNumber);
    syn->add_option("--per-class", per_class, "barcodes per class")->check(CLI::PositiveNumber);
    syn->callback([&] { action = [&] { return cmd_synth(g, classes, per_class); }; });

    auto* ana = app.add_subcommand("analyze", "clustering, statistics and plots");
    AnalyzeArgs aa;
    ana->add_option("--features", aa.features, "feature CSV")->required();
    ana->add_option("--manifest", aa.manifest, "manifest with class labels")->required();
    ana->add_option("--score", aa.scores, "scores to permutation-test (default: all)")
        ->check(CLI::IsMember({"ari", "nmi", "separation"}));
    ana->add_option("--spearman", aa.spearman, "manifest column to rank-correlate (depth)");
    ana->add_flag("--bw-geometry", aa.bw_geometry, "Bombieri-Weyl weighted distances");
    ana->callback([&] { action = [&] { return cmd_analyze(g, aa); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "dlfm: " << e.what() << "\n";
        return kUsage;
    } catch (const InvariantError& e) {
        std::cerr << "dlfm: invariant violated: " << e.what() << "\n";
        return kInternal;
    } catch (const DataError& e) {
        std::cerr << "dlfm: " << e.what() << "\n";
        return kDataError;
    } catch (const ShapeError& e) {
        std::cerr << "dlfm: " << e.what() << "\n";
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "dlfm: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "dlfm: internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace dlfm::cli
