#include <algorithm>
#include <cmath>
#include <numeric>

#include "dlfm/analysis.hpp"
#include "dlfm/error.hpp"

namespace dlfm::analysis {

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, double tol, std::size_t max_sweeps) {
    if (a.size() != n * n) throw ShapeError("jacobi_eigen: matrix is not n x n");
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(2.0 * s);
    };
    double scale = 0.0;
    for (double e : a) scale += e * e;
    scale = std::sqrt(scale);

    SymmetricEigen out;
    for (; out.sweeps < max_sweeps; ++out.sweeps) {
        if (off_norm() <= tol * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = a[order[c] * n + order[c]];
        for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + c] = v[r * n + order[c]];
    }
    return out;
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

// Orthonormalizes `v` against rows [0, count) of `basis`; false if it collapses.
bool orthonormalize(std::vector<double>& v, const std::vector<double>& basis, std::size_t count, std::size_t n) {
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t r = 0; r < count; ++r) {
            const double* b = basis.data() + r * n;
            const double proj = dot(v.data(), b, n);
            for (std::size_t i = 0; i < n; ++i) v[i] -= proj * b[i];
        }
    const double norm = std::sqrt(dot(v.data(), v.data(), n));
    if (norm < 1e-8) return false;
    for (double& e : v) e /= norm;
    return true;
}

}  // namespace

PcaResult pca(MatrixView x, std::size_t n_components) {
    const std::size_t n = x.rows, c = x.cols;
    if (n < 2) throw DataError("pca: needs at least two rows");
    if (n_components == 0 || n_components > std::min(n, c))
        throw ShapeError("pca: n_components must be in [1, min(rows, cols)]");

    PcaResult r;
    r.n_components = n_components;
    r.cols = c;
    r.mean.assign(c, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) r.mean[j] += x.row(i)[j];
    for (double& m : r.mean) m /= static_cast<double>(n);
    std::vector<double> xc(n * c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) xc[i * c + j] = x.row(i)[j] - r.mean[j];
    const double denom = static_cast<double>(n - 1);
    r.total_variance = dot(xc.data(), xc.data(), n * c) / denom;

    r.components.assign(n_components * c, 0.0);
    r.explained_variance.assign(n_components, 0.0);
    std::size_t found = 0;
    const double floor = 1e-12 * std::max(r.total_variance, 1e-300);

    if (n >= c) {
        std::vector<double> cov(c * c, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = xc.data() + i * c;
            for (std::size_t p = 0; p < c; ++p)
                for (std::size_t q = p; q < c; ++q) cov[p * c + q] += row[p] * row[q];
        }
        for (std::size_t p = 0; p < c; ++p)
            for (std::size_t q = p; q < c; ++q) cov[q * c + p] = cov[p * c + q] /= denom;
        const SymmetricEigen eig = jacobi_eigen(std::move(cov), c);
        for (; found < n_components; ++found) {
            r.explained_variance[found] = std::max(eig.values[found], 0.0);
            for (std::size_t j = 0; j < c; ++j) r.components[found * c + j] = eig.vectors[j * c + found];
        }
    } else {
        // Dual form: eigenvectors u of the Gram matrix map to v = Xc^T u / |Xc^T u|.
        std::vector<double> gram(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                gram[i * n + j] = gram[j * n + i] = dot(xc.data() + i * c, xc.data() + j * c, c) / denom;
        const SymmetricEigen eig = jacobi_eigen(std::move(gram), n);
        std::vector<double> v(c);
        for (std::size_t k = 0; k < n_components && eig.values[k] > floor; ++k) {
            std::fill(v.begin(), v.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = eig.vectors[i * n + k];
                const double* row = xc.data() + i * c;
                for (std::size_t j = 0; j < c; ++j) v[j] += u * row[j];
            }
            if (!orthonormalize(v, r.components, found, c)) break;
            std::copy(v.begin(), v.end(), r.components.begin() + found * c);
            r.explained_variance[found++] = eig.values[k];
        }
    }
    // Zero-variance directions: complete with standard basis vectors.
    std::vector<double> e(c);
    for (std::size_t j = 0; found < n_components && j < c; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        if (!orthonormalize(e, r.components, found, c)) continue;
        std::copy(e.begin(), e.end(), r.components.begin() + found * c);
        r.explained_variance[found++] = 0.0;
    }

    for (std::size_t k = 0; k < n_components; ++k) {
        double* comp = r.components.data() + k * c;
        const auto big = std::max_element(comp, comp + c, [](double a, double b) { return std::abs(a) < std::abs(b); });
        if (*big < 0.0)
            for (std::size_t j = 0; j < c; ++j) comp[j] = -comp[j];
    }
    r.projected.resize(n * n_components);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n_components; ++k)
            r.projected[i * n_components + k] = dot(xc.data() + i * c, r.components.data() + k * c, c);
    return r;
}

}  // namespace dlfm::analysis
