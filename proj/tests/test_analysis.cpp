#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dlfm/analysis.hpp"
#include "dlfm/error.hpp"
#include "oracles.hpp"

using namespace dlfm;
using namespace dlfm::analysis;

namespace {

/// ARI by enumerating all pairs of items.
double ari_pairs(const Labeling& a, const Labeling& b) {
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
            ++pairs;
        }
    const double expected = in_a * in_b / pairs, maximum = (in_a + in_b) / 2;
    return (both - expected) / (maximum - expected);
}

struct Blobs {
    std::vector<double> data;
    Labeling labels;
    std::size_t rows = 0, cols = 0;
    MatrixView view() const { return {data, rows, cols}; }
};

Blobs blobs(std::size_t per, const std::vector<std::vector<double>>& centres, double sigma, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Blobs b;
    b.cols = centres[0].size();
    for (std::size_t c = 0; c < centres.size(); ++c)
        for (std::size_t i = 0; i < per; ++i) {
            for (double m : centres[c]) b.data.push_back(m + sigma * rng.normal());
            b.labels.push_back(static_cast<int>(c));
            ++b.rows;
        }
    return b;
}

}  // namespace

TEST_CASE("canonical labels") {
    CHECK(canonicalize(std::vector<int>{5, 5, 2, 7, 2}) == Labeling{0, 0, 1, 2, 1});
    std::vector<std::string> classes;
    const std::vector<std::string> names{"b", "a", "b"};
    CHECK(encode_labels(names, &classes) == Labeling{0, 1, 0});
    CHECK(classes == std::vector<std::string>{"b", "a"});
}

TEST_CASE("ARI") {
    const Labeling a{0, 0, 1, 1}, b{0, 0, 0, 1};
    CHECK(ari(a, a) == 1.0);
    CHECK(ari(a, Labeling{1, 1, 0, 0}) == 1.0);
    // Contingency table [[2,0],[1,1]]: index 1, expected 1*3/6*... = 1, max 2.5.
    CHECK(ari(a, b) == doctest::Approx(0.0));
    CHECK(ari(a, b) == doctest::Approx(ari_pairs(a, b)));
    const Labeling c{0, 0, 0, 1, 1, 1, 2, 2, 2}, d{0, 0, 1, 1, 1, 2, 2, 0, 2};
    CHECK(ari(c, d) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(ari(a, Labeling{0, 1}), ShapeError);
    SplitMix64 rng(71);
    for (int rep = 0; rep < 50; ++rep) {
        Labeling x(20), y(20);
        for (auto& v : x) v = static_cast<int>(rng.below(3));
        for (auto& v : y) v = static_cast<int>(rng.below(4));
        if (canonicalize(x) == canonicalize(y)) continue;
        CHECK(ari(x, y) == doctest::Approx(ari_pairs(x, y)).epsilon(1e-12));
        Labeling renamed = y;
        for (auto& v : renamed) v = 10 - v;
        CHECK(ari(x, renamed) == doctest::Approx(ari(x, y)).epsilon(1e-14));
        CHECK(ari(x, y) == doctest::Approx(ari(y, x)).epsilon(1e-14));
    }
}

TEST_CASE("NMI") {
    const Labeling a{0, 0, 1, 1};
    CHECK(nmi(a, a) == doctest::Approx(1.0));
    CHECK(nmi(a, Labeling{0, 0, 0, 0}) == 0.0);
    CHECK(nmi(Labeling{1, 1, 1}, Labeling{2, 2, 2}) == 1.0);
    CHECK(nmi(a, Labeling{0, 1, 0, 1}) == doctest::Approx(0.0));
    const Labeling c{0, 0, 0, 1, 1, 1, 2, 2, 2}, d{0, 0, 1, 1, 1, 2, 2, 0, 2};
    CHECK(nmi(c, d) == doctest::Approx(0.42061983571430506).epsilon(1e-12));
    CHECK(nmi(d, Labeling{4, 4, 3, 3, 3, 9, 9, 4, 9}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(nmi(a, Labeling{0}), ShapeError);
}

TEST_CASE("k-means") {
    const Blobs b = blobs(20, {{0, 0}, {10, 0}, {0, 10}}, 0.5, 72);
    const auto r = kmeans(b.view(), 3, 1);
    CHECK(ari(r.labels, b.labels) == 1.0);
    CHECK(r.labels == canonicalize(r.labels));
    CHECK(r.centroids.size() == 6);
    const auto again = kmeans(b.view(), 3, 1);
    CHECK(again.labels == r.labels);
    CHECK(again.inertia == r.inertia);
    CHECK(again.centroids == r.centroids);

    const auto all = kmeans(b.view(), b.rows, 3);
    CHECK(all.inertia == 0.0);
    CHECK(std::set<int>(all.labels.begin(), all.labels.end()).size() == b.rows);
    CHECK_THROWS_AS(kmeans(b.view(), b.rows + 1, 0), ShapeError);
    CHECK_THROWS_AS(kmeans(b.view(), 0, 0), ShapeError);

    KMeansOptions opt;
    opt.column_weights = {1.0, 1e-6};  // the second axis barely counts
    const auto w = kmeans(b.view(), 2, 4, opt);
    for (std::size_t i = 0; i < b.rows; ++i) CHECK((w.labels[i] == w.labels[20]) == (b.labels[i] == 1));
}

TEST_CASE("separation ratio") {
    const Blobs b = blobs(30, {{0, 0, 0}, {1, 0, 0}}, 0.1, 73);
    const double r = separation_ratio(b.view(), b.labels);
    CHECK(r > 5.0);
    // Rigid motion: rotate in the xy-plane and translate.
    std::vector<double> moved;
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (std::size_t i = 0; i < b.rows; ++i) {
        const double* p = &b.data[i * 3];
        moved.insert(moved.end(), {c * p[0] - s * p[1] + 3, s * p[0] + c * p[1] - 2, p[2] + 1});
    }
    CHECK(separation_ratio({moved, b.rows, 3}, b.labels) == doctest::Approx(r).epsilon(1e-10));

    const std::vector<double> points{0, 0, 5, 5};
    CHECK(std::isinf(separation_ratio({points, 4, 1}, Labeling{0, 0, 1, 1})));
    CHECK_THROWS_AS(separation_ratio({points, 4, 1}, Labeling{0, 1, 2, 3}), DataError);
    CHECK_THROWS_AS(separation_ratio({points, 4, 1}, Labeling{0, 0, 0, 0}), DataError);
    // A singleton class contributes zero within-class distance.
    const std::vector<double> q{0, 2, 10};
    CHECK(separation_ratio({q, 3, 1}, Labeling{0, 0, 1}) == doctest::Approx(9.0 / (2.0 / 3.0)));

    SplitMix64 rng(74);
    Blobs iso = blobs(60, {{0, 0, 0}}, 1.0, 75);
    iso.labels.clear();
    for (std::size_t i = 0; i < iso.rows; ++i) iso.labels.push_back(static_cast<int>(rng.below(2)));
    CHECK(separation_ratio(iso.view(), iso.labels) < 1.0);
}

TEST_CASE("permutation test") {
    const Blobs b = blobs(15, {{0, 0}, {20, 0}, {0, 20}}, 0.5, 76);
    for (Score s : {Score::Ari, Score::Nmi, Score::Separation}) {
        const auto r = permutation_test(b.view(), b.labels, s, 200, 9, 3);
        CHECK(r.p_value == doctest::Approx(1.0 / 201.0));
        CHECK(r.permutations == 200);
        CHECK(r.null_distribution.size() == 200);
        const auto again = permutation_test(b.view(), b.labels, s, 200, 9, 3);
        CHECK(again.null_distribution == r.null_distribution);
        CHECK(again.p_value == r.p_value);
    }
    CHECK_THROWS_AS(permutation_test(b.view(), b.labels, Score::Ari, 0, 1, 3), ShapeError);

    // Random labels on structureless data: p-values are not concentrated near 0.
    SplitMix64 rng(77);
    const Blobs iso = blobs(40, {{0, 0}}, 1.0, 78);
    std::size_t small = 0;
    for (int rep = 0; rep < 10; ++rep) {
        Labeling lab(iso.rows);
        for (auto& v : lab) v = static_cast<int>(rng.below(2));
        const auto r = permutation_test(iso.view(), lab, Score::Separation, 99, static_cast<std::uint64_t>(rep), 2);
        small += r.p_value <= 0.05;
        CHECK(r.p_value > 0.0);
        CHECK(r.p_value <= 1.0);
    }
    CHECK(small <= 3);
    CHECK(parse_score("nmi") == Score::Nmi);
    CHECK(to_string(Score::Separation) == "separation");
    CHECK_THROWS_AS(parse_score("f1"), ShapeError);
}

TEST_CASE("Spearman") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(spearman(x, std::vector<double>{1, 3, 2, 4}).statistic == doctest::Approx(0.8));
    CHECK(spearman(x, std::vector<double>{1, 4, 9, 16}).statistic == doctest::Approx(1.0));
    CHECK(spearman(x, std::vector<double>{4, 3, 2, 1}).statistic == doctest::Approx(-1.0));
    CHECK(spearman(std::vector<double>{1, 2, 2, 3, 5, 4}, std::vector<double>{2, 1, 4, 4, 6, 5}).statistic ==
          doctest::Approx(0.8676470588235294).epsilon(1e-12));
    CHECK(midranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
    CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2, 3}), ShapeError);
    CHECK_THROWS_AS(spearman(x, std::vector<double>{2, 2, 2, 2}), DataError);
    const auto a = spearman(x, std::vector<double>{1, 3, 2, 4}, 500, 3);
    const auto b = spearman(x, std::vector<double>{1, 3, 2, 4}, 500, 3);
    CHECK(a.p_value == b.p_value);
    CHECK(a.p_value > 0.2);  // only 24 orderings; |rho| >= 0.8 for 4 of them
}

TEST_CASE("Jacobi eigen-decomposition") {
    SplitMix64 rng(79);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + rng.below(8);
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = rng.uniform(-1, 1);
        const auto e = jacobi_eigen(a, n);
        CHECK(std::is_sorted(e.values.rbegin(), e.values.rend()));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) {
                double av = 0;
                for (std::size_t j = 0; j < n; ++j) av += a[i * n + j] * e.vectors[j * n + k];
                CHECK(std::abs(av - e.values[k] * e.vectors[i * n + k]) <= 1e-10);
            }
    }
    CHECK_THROWS_AS(jacobi_eigen({1, 2, 3}, 2), ShapeError);
}

TEST_CASE("PCA") {
    const std::vector<double> x{2, 0, 1, 1, 3, 0, 0, 1, 4, 5, 2, 2, 1, 1, 1};
    const auto p = pca({x, 5, 3}, 3);
    CHECK(p.explained_variance[0] == doctest::Approx(3.8717605068231746).epsilon(1e-12));
    CHECK(p.explained_variance[1] == doctest::Approx(2.3842158466053074).epsilon(1e-12));
    CHECK(p.explained_variance[2] == doctest::Approx(1.0440236465715174).epsilon(1e-12));
    CHECK(std::abs(p.explained_variance[0] + p.explained_variance[1] + p.explained_variance[2] - p.total_variance) <= 1e-9);

    // Collinear points: one component carries everything.
    const std::vector<double> line{0, 0, 1, 2, 2, 4, 3, 6};
    const auto l = pca({line, 4, 2}, 2);
    CHECK(l.explained_variance[0] == doctest::Approx(l.total_variance));
    CHECK(std::abs(l.explained_variance[1]) <= 1e-12);
    CHECK(l.components[0] > 0);
    CHECK(std::abs(l.components[0] * 2 - l.components[1]) <= 1e-12);

    CHECK_THROWS_AS(pca({x, 1, 3}, 1), DataError);
    CHECK_THROWS_AS(pca({x, 5, 3}, 4), ShapeError);
}

TEST_CASE("PCA in the wide regime is orthonormal and distance-preserving") {
    SplitMix64 rng(80);
    const std::size_t rows = 12, cols = 40;
    std::vector<double> x(rows * cols);
    for (double& v : x) v = rng.normal();
    const auto p = pca({x, rows, cols}, rows);
    for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < rows; ++b) {
            double dot = 0;
            for (std::size_t j = 0; j < cols; ++j) dot += p.components[a * cols + j] * p.components[b * cols + j];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
        }
    double sum = 0;
    for (double v : p.explained_variance) sum += v;
    CHECK(std::abs(sum - p.total_variance) <= 1e-9);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = i + 1; j < rows; ++j) {
            double d0 = 0, d1 = 0;
            for (std::size_t c = 0; c < cols; ++c) d0 += std::pow(x[i * cols + c] - x[j * cols + c], 2);
            for (std::size_t k = 0; k < rows; ++k)
                d1 += std::pow(p.projected[i * rows + k] - p.projected[j * rows + k], 2);
            CHECK(std::abs(std::sqrt(d0) - std::sqrt(d1)) <= 1e-9);
        }
    for (std::size_t k = 0; k < rows; ++k) {
        const double* c = &p.components[k * cols];
        const double big = *std::max_element(c, c + cols, [](double a, double b) { return std::abs(a) < std::abs(b); });
        CHECK(big > 0);
    }
}

TEST_CASE("PCA of isotropic data has comparable eigenvalues") {
    SplitMix64 rng(81);
    std::vector<double> x;
    for (int i = 0; i < 2000; ++i) x.insert(x.end(), {rng.normal(), rng.normal()});
    const auto p = pca({x, 2000, 2}, 2);
    const double ratio = p.explained_variance[0] / p.explained_variance[1];
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
}
