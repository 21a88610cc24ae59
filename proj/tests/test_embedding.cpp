#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlfm/embedding.hpp"
#include "dlfm/error.hpp"
#include "oracles.hpp"

using namespace dlfm;

namespace {

std::vector<CorpusEntry> entries(const std::vector<Barcode>& bcs) {
    std::vector<CorpusEntry> out;
    for (std::size_t i = 0; i < bcs.size(); ++i) out.push_back({"b" + std::to_string(i), bcs[i], "x", std::nullopt});
    return out;
}

}  // namespace

TEST_CASE("embed_I on the barcode's own critical points") {
    const TimeSeries x = embed_I(Barcode({{1, 3}, {2, 6}}), 2);
    CHECK(x == TimeSeries::from_points({{0, 0}, {1, 0}, {0.5, 0.5}, {1, 0}, {2, 0}, {0, 0}}));
    CHECK(embed_I(Barcode({{0, 2}}), 1) == TimeSeries::from_points({{0}, {1}, {0}}));
    CHECK(embed_I(Barcode({{0, 2}}), 3) == TimeSeries::from_points({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}));
    CHECK(embed_I(Barcode(), 4) == TimeSeries(4));
    CHECK_THROWS_AS(embed_I(Barcode({{0, 2}}), 0), ShapeError);
}

TEST_CASE("single-barcode feature map") {
    const isig::ISig s = featurize_I(Barcode({{0, 2}}), 1, 3);
    REQUIRE(s.coefficients().size() == 7);
    const std::vector<double> expected{0, 2, -1, 0, -1, 1, 0};
    CHECK(std::equal(expected.begin(), expected.end(), s.coefficients().begin()));
    CHECK(featurize_I(Barcode(), 15, 3).trivial());
    CHECK(featurize_I(Barcode({{1, 1}}), 2, 3).trivial());
}

TEST_CASE("corpus grid is the union of critical points") {
    const std::vector<Barcode> bcs{Barcode({{0, 2}}), Barcode({{1, 3}, {2, 6}})};
    const Corpus c(entries(bcs), 2, 3);
    CHECK(c.grid() == std::vector<double>{0, 1, 2, 2.5, 3, 4, 6});
    const TimeSeries x = embed_ID(bcs[0], c);
    CHECK(x.length() == 7);
    CHECK(x == embed_on_grid(bcs[0], 2, c.grid()));
    CHECK(x.point(1)[0] == 1.0);
    CHECK(x.point(3)[0] == 0.0);
    const Corpus lone(entries({bcs[1]}), 2, 3);
    const auto a = featurize(bcs[1], lone), b = featurize_I(bcs[1], 2, 3);
    CHECK(std::equal(a.coefficients().begin(), a.coefficients().end(), b.coefficients().begin()));
    const Corpus empty_grid(entries({Barcode()}), 3, 2);
    CHECK(empty_grid.grid().empty());
    CHECK(embed_ID(Barcode(), empty_grid) == TimeSeries(3));
}

TEST_CASE("frozen grid featurizes guests on the host grid") {
    SplitMix64 rng(61);
    std::vector<Barcode> host, guest;
    for (int i = 0; i < 5; ++i) host.push_back(oracle::random_barcode(rng, 5));
    for (int i = 0; i < 3; ++i) guest.push_back(oracle::random_barcode(rng, 5));
    const Corpus h(entries(host), 3, 2);
    const Corpus g(entries(guest), h.grid(), 3, 2);
    CHECK(g.grid() == h.grid());
    for (const Barcode& b : guest) CHECK(embed_ID(b, g) == embed_on_grid(b, 3, h.grid()));
}

TEST_CASE("feature matrix rows equal per-barcode featurization") {
    SplitMix64 rng(62);
    std::vector<Barcode> bcs;
    for (int i = 0; i < 9; ++i) bcs.push_back(oracle::random_barcode(rng, 5));
    const Corpus c(entries(bcs), 4, 3);
    const FeatureMatrix one = feature_matrix(c, GridMode::Shared, 1);
    const FeatureMatrix many = feature_matrix(c, GridMode::Shared, 4);
    CHECK(one.values == many.values);
    CHECK(one.rows == 9);
    CHECK(one.cols == c.basis()->size());
    CHECK(one.columns == c.basis()->labels());
    for (std::size_t i = 0; i < bcs.size(); ++i) {
        const auto s = featurize(bcs[i], c);
        CHECK(std::equal(s.coefficients().begin(), s.coefficients().end(), one.row(i).begin()));
    }
    const FeatureMatrix per = feature_matrix(c, GridMode::PerBarcode, 2);
    for (std::size_t i = 0; i < bcs.size(); ++i) {
        const auto s = featurize_I(bcs[i], 4, 3);
        CHECK(std::equal(s.coefficients().begin(), s.coefficients().end(), per.row(i).begin()));
    }
    CHECK_THROWS_AS(feature_matrix(Corpus({}, 2, 2)), DataError);
}

TEST_CASE("single-level moments depend only on persistence") {
    SplitMix64 rng(63);
    const auto basis = isig::WordBasis::get(1, 5);
    for (int rep = 0; rep < 20; ++rep) {
        const Barcode b = oracle::single_level_barcode(rng, 5);
        const auto s = isig::isig(embed_I(b, 1), basis);
        for (unsigned n : {1u, 3u, 5u}) {
            isig::Word w;
            w.letters.assign(n, isig::Monomial{{1}});
            CHECK(std::abs(s[w]) <= 1e-9);
        }
        for (unsigned n : {2u, 4u}) {
            double expected = 0;
            for (const Bar& bar : b.bars()) expected += std::pow(bar.persistence(), n) / std::pow(2.0, n - 1);
            CHECK(std::abs(s[isig::Word{{isig::Monomial{{n}}}}] - expected) <= 1e-9);
        }
    }
}

TEST_CASE("landscape paths are loops") {
    SplitMix64 rng(64);
    for (int rep = 0; rep < 20; ++rep) {
        const auto r = chen::loop_diagnostics(landscape_path(oracle::random_barcode(rng, 5), 3), 1e-9);
        CHECK(r.is_loop);
        CHECK(r.consistent);
    }
    CHECK(landscape_path(Barcode(), 2).size() == 0);
}
