#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dlfm::analysis {

/// Non-owning row-major matrix.
struct MatrixView {
    std::span<const double> data;
    std::size_t rows = 0, cols = 0;

    std::span<const double> row(std::size_t i) const { return data.subspan(i * cols, cols); }
};

/// 0-based contiguous labels aligned to matrix rows.
using Labeling = std::vector<int>;

/// Maps arbitrary labels to 0-based ids in order of first appearance.
Labeling canonicalize(std::span<const int> labels);
Labeling encode_labels(std::span<const std::string> names, std::vector<std::string>* classes = nullptr);

struct KMeansOptions {
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    double tolerance = 1e-10;  // max centroid shift
    /// Per-column weights folded into the geometry (e.g. Bombieri-Weyl);
    /// empty means plain Euclidean.
    std::vector<double> column_weights;
};

struct KMeansResult {
    Labeling labels;
    std::vector<double> centroids;  // k x cols
    double inertia = 0.0;
    std::size_t iterations = 0;
};

/// k-means++ seeding + Lloyd iterations; best inertia over restarts. Restart r
/// draws from substream r of `seed`.
KMeansResult kmeans(MatrixView x, std::size_t k, std::uint64_t seed, const KMeansOptions& opt = {});

double ari(std::span<const int> a, std::span<const int> b);
/// Mutual information over the arithmetic mean of the entropies.
double nmi(std::span<const int> a, std::span<const int> b);

/// Mean pairwise distance between class centroids over the mean distance of
/// rows to their own class centroid. +inf when within-class spread is zero.
double separation_ratio(MatrixView x, std::span<const int> labels);

struct StatResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t permutations = 0;
    std::vector<double> null_distribution;
};

enum class Score { Ari, Nmi, Separation };
Score parse_score(const std::string& name);
std::string to_string(Score s);

/// p = (1 + #{permuted >= observed}) / (1 + n_perm). For ari/nmi the k-means
/// partition (k = clusters, seeded) is fixed and compared against shuffled
/// labels; replicate i shuffles with substream i.
StatResult permutation_test(MatrixView x, std::span<const int> labels, Score score,
                            std::size_t n_perm, std::uint64_t seed, std::size_t clusters,
                            const KMeansOptions& opt = {});

/// Mid-ranks (ties averaged), 1-based.
std::vector<double> midranks(std::span<const double> v);

/// Spearman rank correlation; two-sided permutation p-value.
StatResult spearman(std::span<const double> x, std::span<const double> y,
                    std::size_t n_perm = 1000, std::uint64_t seed = 0);

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues descending; eigenvectors are the columns of `vectors`
/// (row-major n x n).
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<double> vectors;
    std::size_t sweeps = 0;
};
SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, double tol = 1e-14,
                            std::size_t max_sweeps = 100);

struct PcaResult {
    std::size_t n_components = 0, cols = 0;
    std::vector<double> components;          // n_components x cols, orthonormal rows
    std::vector<double> explained_variance;  // eigenvalues of the covariance
    double total_variance = 0.0;
    std::vector<double> mean;
    std::vector<double> projected;           // rows x n_components
};

/// Covariance PCA with 1/(rows-1) normalization. Sign: the largest-magnitude
/// entry of each component is positive.
PcaResult pca(MatrixView x, std::size_t n_components);

}  // namespace dlfm::analysis
