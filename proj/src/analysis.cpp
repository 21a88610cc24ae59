#include "dlfm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dlfm/error.hpp"
#include "dlfm/rng.hpp"
#include "dlfm/simd/kernels.hpp"

namespace dlfm::analysis {

Labeling canonicalize(std::span<const int> labels) {
    std::map<int, int> ids;
    Labeling out;
    out.reserve(labels.size());
    for (int l : labels) out.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
    return out;
}

Labeling encode_labels(std::span<const std::string> names, std::vector<std::string>* classes) {
    std::map<std::string, int> ids;
    Labeling out;
    if (classes) classes->clear();
    for (const auto& n : names) {
        auto [it, fresh] = ids.try_emplace(n, static_cast<int>(ids.size()));
        if (fresh && classes) classes->push_back(n);
        out.push_back(it->second);
    }
    return out;
}

namespace {

class Geometry {
public:
    explicit Geometry(const std::vector<double>& weights)
        : weights_(weights), kern_(simd::active()) {}

    double sq(std::span<const double> a, const double* b) const {
        return weights_.empty() ? kern_.sq_distance(a.data(), b, a.size())
                                : kern_.weighted_sq_distance(a.data(), b, weights_.data(), a.size());
    }

private:
    const std::vector<double>& weights_;
    const simd::KernelTable& kern_;
};

struct LloydRun {
    Labeling labels;
    std::vector<double> centroids;
    double inertia = 0.0;
    std::size_t iterations = 0;
};

std::vector<double> kmeanspp_seed(MatrixView x, std::size_t k, const Geometry& geo, SplitMix64& rng) {
    const std::size_t n = x.rows, c = x.cols;
    std::vector<double> centers;
    centers.reserve(k * c);
    const std::size_t first = static_cast<std::size_t>(rng.below(n));
    centers.insert(centers.end(), x.row(first).begin(), x.row(first).end());

    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    for (std::size_t j = 1; j < k; ++j) {
        const double* last = centers.data() + (j - 1) * c;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            best[i] = std::min(best[i], geo.sq(x.row(i), last));
            total += best[i];
        }
        std::size_t pick = n - 1;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                target -= best[i];
                if (target < 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(rng.below(n));
        }
        centers.insert(centers.end(), x.row(pick).begin(), x.row(pick).end());
    }
    return centers;
}

double assign(MatrixView x, std::size_t k, const std::vector<double>& centers, const Geometry& geo,
              Labeling& labels, std::vector<double>& dist) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        double bd = std::numeric_limits<double>::infinity();
        int bl = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const double dj = geo.sq(x.row(i), centers.data() + j * x.cols);
            if (dj < bd) {
                bd = dj;
                bl = static_cast<int>(j);
            }
        }
        labels[i] = bl;
        dist[i] = bd;
        inertia += bd;
    }
    return inertia;
}

LloydRun lloyd(MatrixView x, std::size_t k, SplitMix64& rng, const KMeansOptions& opt, const Geometry& geo) {
    const std::size_t n = x.rows, c = x.cols;
    LloydRun run;
    run.centroids = kmeanspp_seed(x, k, geo, rng);
    run.labels.assign(n, 0);
    std::vector<double> dist(n);

    for (run.iterations = 0; run.iterations < opt.max_iterations; ++run.iterations) {
        assign(x, k, run.centroids, geo, run.labels, dist);
        std::vector<double> next(k * c, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = x.row(i);
            double* dst = next.data() + run.labels[i] * c;
            for (std::size_t m = 0; m < c; ++m) dst[m] += r[m];
            ++count[run.labels[i]];
        }
        for (std::size_t j = 0; j < k; ++j) {
            double* dst = next.data() + j * c;
            if (count[j] == 0) {
                // Re-seed an empty cluster with the worst-fit point of a
                // cluster that can spare it.
                std::size_t far = 0;
                double fd = -1.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (count[run.labels[i]] > 1 && dist[i] > fd) {
                        fd = dist[i];
                        far = i;
                    }
                --count[run.labels[far]];
                run.labels[far] = static_cast<int>(j);
                count[j] = 1;
                dist[far] = 0.0;
                std::copy(x.row(far).begin(), x.row(far).end(), dst);
                continue;
            }
            for (std::size_t m = 0; m < c; ++m) dst[m] /= static_cast<double>(count[j]);
        }
        double shift = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            shift = std::max(shift, std::sqrt(geo.sq(std::span<const double>(next.data() + j * c, c),
                                                     run.centroids.data() + j * c)));
        run.centroids = std::move(next);
        if (shift < opt.tolerance) {
            ++run.iterations;
            break;
        }
    }
    run.inertia = assign(x, k, run.centroids, geo, run.labels, dist);
    return run;
}

}  // namespace

KMeansResult kmeans(MatrixView x, std::size_t k, std::uint64_t seed, const KMeansOptions& opt) {
    if (k == 0 || k > x.rows) throw ShapeError("kmeans: need 1 <= k <= rows");
    if (!opt.column_weights.empty() && opt.column_weights.size() != x.cols)
        throw ShapeError("kmeans: column weight count does not match columns");
    const Geometry geo(opt.column_weights);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(1, opt.restarts); ++r) {
        SplitMix64 rng = SplitMix64::substream(seed, r);
        LloydRun run = lloyd(x, k, rng, opt, geo);
        if (run.inertia < best.inertia) {
            best.labels = std::move(run.labels);
            best.centroids = std::move(run.centroids);
            best.inertia = run.inertia;
            best.iterations = run.iterations;
        }
    }
    // Relabel clusters by first appearance; centroids follow.
    const Labeling canon = canonicalize(best.labels);
    std::vector<double> cents(best.centroids.size());
    for (std::size_t i = 0; i < canon.size(); ++i)
        std::copy_n(best.centroids.begin() + best.labels[i] * x.cols, x.cols,
                    cents.begin() + canon[i] * x.cols);
    best.centroids = std::move(cents);
    best.labels = canon;
    return best;
}

namespace {

struct Contingency {
    std::size_t n = 0;
    std::map<std::pair<int, int>, std::size_t> cells;
    std::map<int, std::size_t> rows, cols;
};

Contingency contingency(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw ShapeError("partitions have different lengths");
    Contingency t;
    t.n = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.cells[{a[i], b[i]}];
        ++t.rows[a[i]];
        ++t.cols[b[i]];
    }
    return t;
}

double comb2(std::size_t v) { return 0.5 * static_cast<double>(v) * (static_cast<double>(v) - 1.0); }

double entropy(const std::map<int, std::size_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [_, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

double ari(std::span<const int> a, std::span<const int> b) {
    const Contingency t = contingency(a, b);
    if (t.n < 2) return 1.0;
    double index = 0.0, sa = 0.0, sb = 0.0;
    for (const auto& [_, c] : t.cells) index += comb2(c);
    for (const auto& [_, c] : t.rows) sa += comb2(c);
    for (const auto& [_, c] : t.cols) sb += comb2(c);
    const double expected = sa * sb / comb2(t.n);
    const double maximum = 0.5 * (sa + sb);
    // Both partitions trivial (one block, or all singletons) in the same way.
    if (maximum == expected) return 1.0;
    return (index - expected) / (maximum - expected);
}

double nmi(std::span<const int> a, std::span<const int> b) {
    const Contingency t = contingency(a, b);
    const double n = static_cast<double>(t.n);
    const double ha = entropy(t.rows, n), hb = entropy(t.cols, n);
    if (ha == 0.0 && hb == 0.0) return 1.0;
    if (ha == 0.0 || hb == 0.0) return 0.0;
    double mi = 0.0;
    for (const auto& [key, c] : t.cells) {
        const double pij = static_cast<double>(c) / n;
        const double pi = static_cast<double>(t.rows.at(key.first)) / n;
        const double pj = static_cast<double>(t.cols.at(key.second)) / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

double separation_ratio(MatrixView x, std::span<const int> labels) {
    if (labels.size() != x.rows) throw ShapeError("separation_ratio: label count != rows");
    const Labeling lab = canonicalize(labels);
    const std::size_t k = lab.empty() ? 0 : static_cast<std::size_t>(*std::max_element(lab.begin(), lab.end())) + 1;
    if (k < 2) throw DataError("separation_ratio: needs at least two classes");
    const std::size_t c = x.cols;
    std::vector<double> cent(k * c, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t m = 0; m < c; ++m) cent[lab[i] * c + m] += x.row(i)[m];
        ++count[lab[i]];
    }
    if (std::all_of(count.begin(), count.end(), [](std::size_t v) { return v == 1; }))
        throw DataError("separation_ratio: every class is a singleton");
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t m = 0; m < c; ++m) cent[j * c + m] /= static_cast<double>(count[j]);

    const auto& kern = simd::active();
    double between = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j, ++pairs)
            between += std::sqrt(kern.sq_distance(cent.data() + i * c, cent.data() + j * c, c));
    between /= static_cast<double>(pairs);

    double within = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i)
        within += std::sqrt(kern.sq_distance(x.row(i).data(), cent.data() + lab[i] * c, c));
    within /= static_cast<double>(x.rows);
    if (within == 0.0) return std::numeric_limits<double>::infinity();
    return between / within;
}

Score parse_score(const std::string& name) {
    if (name == "ari") return Score::Ari;
    if (name == "nmi") return Score::Nmi;
    if (name == "separation") return Score::Separation;
    throw ShapeError("unknown score '" + name + "' (expected ari, nmi or separation)");
}

std::string to_string(Score s) {
    switch (s) {
        case Score::Ari: return "ari";
        case Score::Nmi: return "nmi";
        case Score::Separation: return "separation";
    }
    return "?";
}

StatResult permutation_test(MatrixView x, std::span<const int> labels, Score score,
                            std::size_t n_perm, std::uint64_t seed, std::size_t clusters,
                            const KMeansOptions& opt) {
    if (n_perm == 0) throw ShapeError("permutation_test: need at least one permutation");
    if (labels.size() != x.rows) throw ShapeError("permutation_test: label count != rows");
    Labeling truth(labels.begin(), labels.end());

    Labeling partition;
    if (score != Score::Separation) partition = kmeans(x, clusters, seed, opt).labels;
    const auto evaluate = [&](std::span<const int> lab) {
        switch (score) {
            case Score::Ari: return ari(partition, lab);
            case Score::Nmi: return nmi(partition, lab);
            case Score::Separation: return separation_ratio(x, lab);
        }
        return 0.0;
    };

    StatResult r;
    r.statistic = evaluate(truth);
    r.permutations = n_perm;
    r.null_distribution.resize(n_perm);
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < n_perm; ++p) {
        // Substream 0 belongs to k-means restarts of the same seed; offset replicates.
        SplitMix64 rng = SplitMix64::substream(seed ^ 0x5045524D55544553ull, p);
        Labeling shuffled = truth;
        shuffle(std::span<int>(shuffled), rng);
        r.null_distribution[p] = evaluate(shuffled);
        if (r.null_distribution[p] >= r.statistic) ++at_least;
    }
    r.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + n_perm);
    return r;
}

std::vector<double> midranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t m = i; m <= j; ++m) rank[order[m]] = r;
        i = j + 1;
    }
    return rank;
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

StatResult spearman(std::span<const double> x, std::span<const double> y, std::size_t n_perm,
                    std::uint64_t seed) {
    if (x.size() != y.size()) throw ShapeError("spearman: length mismatch");
    if (x.size() < 3) throw ShapeError("spearman: needs at least 3 observations");
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
    };
    if (constant(x) || constant(y)) throw DataError("spearman: correlation undefined for constant input");

    const std::vector<double> rx = midranks(x);
    std::vector<double> ry = midranks(y);
    StatResult r;
    r.statistic = pearson(rx, ry);
    r.permutations = n_perm;
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < n_perm; ++p) {
        SplitMix64 rng = SplitMix64::substream(seed, p);
        std::vector<double> perm = ry;
        shuffle(std::span<double>(perm), rng);
        const double rho = pearson(rx, perm);
        r.null_distribution.push_back(rho);
        if (std::abs(rho) >= std::abs(r.statistic) - 1e-12) ++at_least;
    }
    r.p_value = n_perm ? static_cast<double>(1 + at_least) / static_cast<double>(1 + n_perm) : 1.0;
    return r;
}

}  // namespace dlfm::analysis
