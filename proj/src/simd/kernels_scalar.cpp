#include "dlfm/simd/kernels.hpp"

namespace dlfm::simd {
namespace {

void axpy(double* y, const double* x, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gather_mul(double* out, const double* a, const std::int32_t* ia, const double* b,
                const std::int32_t* ib, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[ia[i]] * b[ib[i]];
}

void gather_mul_add(double* out, const double* a, const std::int32_t* ia, const double* b,
                    const std::int32_t* ib, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += a[ia[i]] * b[ib[i]];
}

void tent(double* out, const double* birth, const double* death, double t, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double up = t - birth[i];
        const double down = death[i] - t;
        const double m = down < up ? down : up;
        out[i] = 0.0 < m ? m : 0.0;
    }
}

double sq_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double weighted_sq_distance(const double* a, const double* b, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += w[i] * (d * d);
    }
    return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::Scalar, "scalar",      axpy,        gather_mul,
                                   gather_mul_add, tent,       sq_distance, weighted_sq_distance};
    return table;
}

}  // namespace dlfm::simd
