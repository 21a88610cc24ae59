#include "dlfm/barcode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dlfm/error.hpp"

namespace dlfm {

Barcode::Barcode(std::vector<Bar> bars) : bars_(std::move(bars)) {
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        const Bar& b = bars_[i];
        if (!std::isfinite(b.birth) || !std::isfinite(b.death))
            throw DataError("bar " + std::to_string(i) + ": non-finite endpoint");
        if (b.birth < 0.0) throw DataError("bar " + std::to_string(i) + ": negative birth");
        if (b.death < b.birth) throw DataError("bar " + std::to_string(i) + ": death < birth");
    }
    std::sort(bars_.begin(), bars_.end());
    span_ = 0.0;
    for (const Bar& b : bars_) span_ = std::max(span_, b.death);
}

std::size_t Barcode::trivial_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(bars_.begin(), bars_.end(), [](const Bar& b) { return b.trivial(); }));
}

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the index-th bar array (bracket nesting depth 3 in `{"bars": [[..]]}`).
std::size_t line_of_bar(std::string_view text, std::size_t index) {
    int depth = 0;
    bool in_string = false;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{' || c == '[') {
            if (++depth == 3 && c == '[' && seen++ == index) return line_of_offset(text, i);
        } else if (c == '}' || c == ']') --depth;
    }
    return 0;
}

}  // namespace

Barcode parse_barcode(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed barcode JSON: ") + e.what(),
                         line_of_offset(text, e.byte ? e.byte - 1 : 0));
    }
    if (!doc.is_object() || !doc.contains("bars") || !doc["bars"].is_array())
        throw ParseError("barcode JSON must be an object with a \"bars\" array", 1);

    const json& arr = doc["bars"];
    std::vector<Bar> bars;
    bars.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& item = arr[i];
        const auto fail = [&](const std::string& why) {
            throw ParseError("bar " + std::to_string(i) + ": " + why, line_of_bar(text, i));
        };
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            fail("expected [birth, death]");
        const Bar bar{item[0].get<double>(), item[1].get<double>()};
        if (bar.death < bar.birth) fail("death < birth");
        if (bar.birth < 0.0) fail("negative birth");
        bars.push_back(bar);
    }
    return Barcode(std::move(bars));
}

Barcode read_barcode_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open barcode file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_barcode(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

std::string to_json(const Barcode& barcode) {
    nlohmann::json bars = nlohmann::json::array();
    for (const Bar& b : barcode.bars()) bars.push_back({b.birth, b.death});
    return nlohmann::json{{"bars", bars}}.dump();
}

namespace {

// Bipartite graph on n + m nodes per side for the diagonal-augmented matching:
// left = bars of A, then diagonal images of B; right = bars of B, then
// diagonal images of A.
class BottleneckGraph {
public:
    BottleneckGraph(std::span<const Bar> a, std::span<const Bar> b) : a_(a), b_(b) {}

    std::size_t size() const { return a_.size() + b_.size(); }

    double cost(std::size_t left, std::size_t right) const {
        const std::size_t n = a_.size(), m = b_.size();
        if (left < n && right < m)
            return std::max(std::abs(a_[left].birth - b_[right].birth),
                            std::abs(a_[left].death - b_[right].death));
        if (left < n) return right - m == left ? a_[left].persistence() / 2 : kInf;
        if (right < m) return left - n == right ? b_[right].persistence() / 2 : kInf;
        return 0.0;
    }

    bool perfect_matching_within(double threshold) const {
        const std::size_t v = size();
        std::vector<std::ptrdiff_t> match_right(v, -1);
        std::vector<char> visited(v);
        for (std::size_t l = 0; l < v; ++l) {
            std::fill(visited.begin(), visited.end(), 0);
            if (!augment(l, threshold, match_right, visited)) return false;
        }
        return true;
    }

    static constexpr double kInf = std::numeric_limits<double>::infinity();

private:
    bool augment(std::size_t l, double threshold, std::vector<std::ptrdiff_t>& match_right,
                 std::vector<char>& visited) const {
        for (std::size_t r = 0; r < size(); ++r) {
            if (visited[r] || cost(l, r) > threshold) continue;
            visited[r] = 1;
            if (match_right[r] < 0 ||
                augment(static_cast<std::size_t>(match_right[r]), threshold, match_right, visited)) {
                match_right[r] = static_cast<std::ptrdiff_t>(l);
                return true;
            }
        }
        return false;
    }

    std::span<const Bar> a_, b_;
};

}  // namespace

double bottleneck_distance(const Barcode& a, const Barcode& b) {
    const BottleneckGraph graph(a.bars(), b.bars());
    std::vector<double> candidates{0.0};
    for (std::size_t l = 0; l < graph.size(); ++l)
        for (std::size_t r = 0; r < graph.size(); ++r) {
            const double c = graph.cost(l, r);
            if (c != BottleneckGraph::kInf) candidates.push_back(c);
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (graph.perfect_matching_within(candidates[mid])) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

}  // namespace dlfm
