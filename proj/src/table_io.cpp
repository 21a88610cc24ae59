#include "dlfm/table_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dlfm/error.hpp"

namespace dlfm::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r') {
            out.back() += c;
        }
    }
    return out;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path + "'");
}

namespace {

double parse_number(const std::string& s, const std::string& what, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ParseError(what + ": not a number: '" + s + "'", line);
    return v;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        out.push_back(std::move(l));
    }
    return out;
}

}  // namespace

std::vector<ManifestRow> read_manifest(const std::string& path) {
    const auto lines = lines_of(read_text(path));
    if (lines.empty() || split_csv(lines[0]) != std::vector<std::string>{"id", "path", "class", "depth"})
        throw ParseError(path + ": manifest header must be 'id,path,class,depth'", 1);
    const fs::path base = fs::path(path).parent_path();
    std::vector<ManifestRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv(lines[i]);
        if (f.size() != 4) throw ParseError(path + ": expected 4 fields", i + 1);
        if (f[0].empty()) throw ParseError(path + ": empty id", i + 1);
        ManifestRow r{f[0], f[1], f[2], std::nullopt};
        const fs::path p(f[1]);
        r.path = (p.is_absolute() ? p : base / p).lexically_normal().string();
        if (!f[3].empty()) r.depth = parse_number(f[3], path + ": depth", i + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CorpusEntry> load_entries(const std::vector<ManifestRow>& rows) {
    std::vector<std::string> missing;
    for (const auto& r : rows)
        if (!fs::is_regular_file(r.path)) missing.push_back(r.id + " (" + r.path + ")");
    if (!missing.empty()) {
        std::string msg = "missing barcode files:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw DataError(msg);
    }
    std::vector<CorpusEntry> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        try {
            out.push_back({r.id, read_barcode_file(r.path), r.label, r.depth});
        } catch (const ParseError& e) {
            throw ParseError(r.path + ": " + e.what(), e.line());
        }
    }
    return out;
}

void write_features(const std::string& path, const FeatureMatrix& m) {
    std::string s = "id";
    for (const auto& c : m.columns) s += "," + c;
    s += '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
        s += m.ids[i];
        for (double v : m.row(i)) s += "," + format_double(v);
        s += '\n';
    }
    write_text(path, s);
}

FeatureMatrix read_features(const std::string& path) {
    const auto lines = lines_of(read_text(path));
    if (lines.empty()) throw ParseError(path + ": empty feature file", 1);
    auto header = split_csv(lines[0]);
    if (header.empty() || header[0] != "id") throw ParseError(path + ": header must start with 'id'", 1);
    FeatureMatrix m;
    m.columns.assign(header.begin() + 1, header.end());
    m.cols = m.columns.size();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv(lines[i]);
        if (f.size() != m.cols + 1)
            throw ParseError(path + ": expected " + std::to_string(m.cols + 1) + " fields", i + 1);
        m.ids.push_back(f[0]);
        for (std::size_t j = 1; j < f.size(); ++j) m.values.push_back(parse_number(f[j], path, i + 1));
        ++m.rows;
    }
    return m;
}

std::string meta_path(const std::string& features_path) { return features_path + ".meta.json"; }

void write_meta(const std::string& features_path, const FeatureMeta& meta) {
    nlohmann::ordered_json j;
    j["levels"] = meta.levels;
    j["weight"] = meta.weight;
    j["grid"] = meta.grid;
    j["grid_size"] = meta.grid_size;
    write_text(meta_path(features_path), j.dump(2) + "\n");
}

std::optional<FeatureMeta> read_meta(const std::string& features_path) {
    const std::string p = meta_path(features_path);
    if (!fs::is_regular_file(p)) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(read_text(p));
        return FeatureMeta{j.at("levels").get<std::size_t>(), j.at("weight").get<unsigned>(),
                           j.value("grid", std::string{}), j.value("grid_size", std::size_t{0})};
    } catch (const nlohmann::json::exception& e) {
        throw DataError(p + ": " + e.what());
    }
}

TimeSeries read_timeseries_csv(const std::string& path) {
    const auto lines = lines_of(read_text(path));
    std::vector<std::vector<double>> points;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<double> p;
        for (const auto& f : split_csv(lines[i])) p.push_back(parse_number(f, path, i + 1));
        if (!points.empty() && p.size() != points[0].size())
            throw ParseError(path + ": ragged row", i + 1);
        points.push_back(std::move(p));
    }
    if (points.empty()) throw ParseError(path + ": no time points", 1);
    return TimeSeries::from_points(points);
}

void write_timeseries_csv(const std::string& path, const TimeSeries& x) {
    std::string s;
    for (std::size_t j = 0; j < x.length(); ++j) {
        const auto p = x.point(j);
        for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + format_double(p[i]);
        s += '\n';
    }
    write_text(path, s);
}

std::string landscape_json(const Landscape& l) {
    nlohmann::ordered_json j;
    j["span"] = l.span();
    j["levels"] = nlohmann::ordered_json::array();
    for (const auto& level : l.levels()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : level.pairs()) arr.push_back({p.t, p.value});
        j["levels"].push_back(std::move(arr));
    }
    return j.dump() + "\n";
}

}  // namespace dlfm::io
