#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlfm/chen.hpp"
#include "dlfm/error.hpp"
#include "oracles.hpp"

using namespace dlfm;
using namespace dlfm::chen;

namespace {

std::vector<double> level(const TensorSeries& t, std::size_t k) { return {t.level(k).begin(), t.level(k).end()}; }

}  // namespace

TEST_CASE("tensor levels have d^k entries") {
    const TensorSeries t = TensorSeries::unit(3, 4);
    CHECK(t.max_order() == 4);
    CHECK(t.level(0)[0] == 1.0);
    CHECK(t.level(3).size() == 27);
    CHECK(t.max_abs() == 0.0);
    CHECK(t.max_abs(true) == 1.0);
}

TEST_CASE("exp of a vector is the segment signature") {
    const std::vector<double> a{0.5, -2.0};
    const TensorSeries e = tensor_exp(a, 3);
    CHECK(level(e, 1) == a);
    const std::vector<std::vector<double>> seg{a};
    CHECK(oracle::max_abs_diff(level(e, 2), oracle::chen_level2(seg, 2)) <= 1e-15);
    CHECK(oracle::max_abs_diff(level(e, 3), oracle::chen_level3(seg, 2)) <= 1e-15);
}

TEST_CASE("pwl signature matches closed-form levels 2 and 3") {
    SplitMix64 rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 1 + rng.below(3), m = 1 + rng.below(6);
        const auto segs = oracle::random_segments(rng, m, d);
        const TensorSeries s = pwl_signature(PWLPath(d, segs), 3);
        CHECK(oracle::max_abs_diff(level(s, 2), oracle::chen_level2(segs, d)) <= 1e-12);
        CHECK(oracle::max_abs_diff(level(s, 3), oracle::chen_level3(segs, d)) <= 1e-12);
    }
}

TEST_CASE("unit square loop") {
    const PWLPath sq(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    const TensorSeries s = pwl_signature(sq, 3);
    CHECK(oracle::max_abs_diff(level(s, 1), {0, 0}) == 0.0);
    CHECK(oracle::max_abs_diff(level(s, 2), {0, 1, -1, 0}) <= 1e-15);
    CHECK(oracle::max_abs_diff(half_wedge_sum(sq), {0, 1, -1, 0}) <= 1e-15);
    const LoopReport r = loop_diagnostics(sq, 1e-12);
    CHECK(r.is_loop);
    CHECK(r.consistent);
}

TEST_CASE("minimal segment decomposition") {
    const PWLPath p(2, {{1, 0}, {0, 0}, {2, 0}, {0, 1}, {0, 3}, {0, -1}});
    REQUIRE(p.size() == 3);
    CHECK(p.segment(0)[0] == 3.0);
    CHECK(p.segment(1)[1] == 4.0);
    CHECK(p.segment(2)[1] == -1.0);
    // Splitting a segment does not change the signature.
    const PWLPath q(2, {{3, 0}, {0, 4}, {0, -1}});
    CHECK(oracle::max_abs_diff(pwl_signature(p, 4), pwl_signature(q, 4)) == 0.0);
    const PWLPath z(2, {{0, 0}});
    CHECK(z.size() == 0);
    CHECK(pwl_signature(z, 3).max_abs() == 0.0);
    CHECK_THROWS_AS(PWLPath(2, {}), ShapeError);
    CHECK_THROWS_AS(PWLPath(2, {{1, 2, 3}}), ShapeError);
}

TEST_CASE("Chen relation") {
    SplitMix64 rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 1 + rng.below(3);
        const PWLPath a(d, oracle::random_segments(rng, 1 + rng.below(4), d));
        const PWLPath b(d, oracle::random_segments(rng, 1 + rng.below(4), d));
        const TensorSeries lhs = pwl_signature(concat(a, b), 4);
        const TensorSeries rhs = tensor_mul(pwl_signature(a, 4), pwl_signature(b, 4));
        CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("exp and log are inverse") {
    SplitMix64 rng(43);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t d = 1 + rng.below(3);
        const TensorSeries s = pwl_signature(PWLPath(d, oracle::random_segments(rng, 1 + rng.below(5), d)), 4);
        CHECK(oracle::max_abs_diff(tensor_exp_series(tensor_log(s)), s) <= 1e-11);
        // log of a single segment is the segment itself.
        const std::vector<double> a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const TensorSeries l = tensor_log(tensor_exp(a, 4));
        CHECK(oracle::max_abs_diff(level(l, 1), a) <= 1e-15);
        for (std::size_t k = 2; k <= 4; ++k) CHECK(oracle::max_abs_diff(level(l, k), std::vector<double>(l.level(k).size(), 0.0)) <= 1e-14);
    }
}

TEST_CASE("symmetric part is half the squared displacement") {
    SplitMix64 rng(44);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t d = 2 + rng.below(2);
        const PWLPath p(d, oracle::random_segments(rng, 2 + rng.below(5), d));
        const MatrixParts mp = signature_matrix_parts(pwl_signature(p, 2));
        const auto g = p.displacement();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                CHECK(std::abs(mp.sym[i * d + j] - 0.5 * g[i] * g[j]) <= 1e-12);
                CHECK(mp.skew[i * d + j] == -mp.skew[j * d + i]);
            }
        CHECK(oracle::max_abs_diff(mp.skew, half_wedge_sum(p)) <= 1e-12);
    }
}

TEST_CASE("loop diagnostics agree on loops and non-loops") {
    SplitMix64 rng(45);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 2 + rng.below(2);
        const LoopReport yes = loop_diagnostics(PWLPath(d, oracle::random_loop(rng, 3 + rng.below(4), d)), 1e-9);
        CHECK(yes.is_loop);
        CHECK(yes.consistent);
        auto segs = oracle::random_segments(rng, 2 + rng.below(4), d);
        segs.push_back(std::vector<double>(d, 2.0));
        const LoopReport open = loop_diagnostics(PWLPath(d, segs), 1e-9);
        CHECK_FALSE(open.displacement_zero);
        CHECK_FALSE(open.level1_vanishes);
        CHECK_FALSE(open.level2_wedge);
        CHECK_FALSE(open.level3_log);
        CHECK(open.consistent);
    }
}
