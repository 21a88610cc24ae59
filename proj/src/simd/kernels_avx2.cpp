#include "dlfm/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define DLFM_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#else
#define DLFM_HAVE_AVX2_VARIANT 0
#endif

namespace dlfm::simd {

#if DLFM_HAVE_AVX2_VARIANT

// Functions carry their own target attribute so the rest of the library stays
// baseline x86-64. No FMA: elementwise results must match the scalar table.
#define DLFM_AVX2 __attribute__((target("avx2")))

namespace {

DLFM_AVX2 void axpy(double* y, const double* x, double alpha, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

DLFM_AVX2 inline __m256d gather_product(const double* a, const std::int32_t* ia, const double* b,
                                        const std::int32_t* ib) {
    const __m128i xa = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ia));
    const __m128i xb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ib));
    const __m256d va = _mm256_i32gather_pd(a, xa, 8);
    const __m256d vb = _mm256_i32gather_pd(b, xb, 8);
    return _mm256_mul_pd(va, vb);
}

DLFM_AVX2 void gather_mul(double* out, const double* a, const std::int32_t* ia, const double* b,
                          const std::int32_t* ib, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, gather_product(a, ia + i, b, ib + i));
    for (; i < n; ++i) out[i] = a[ia[i]] * b[ib[i]];
}

DLFM_AVX2 void gather_mul_add(double* out, const double* a, const std::int32_t* ia,
                              const double* b, const std::int32_t* ib, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d acc = _mm256_loadu_pd(out + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(acc, gather_product(a, ia + i, b, ib + i)));
    }
    for (; i < n; ++i) out[i] += a[ia[i]] * b[ib[i]];
}

DLFM_AVX2 void tent(double* out, const double* birth, const double* death, double t,
                    std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d up = _mm256_sub_pd(vt, _mm256_loadu_pd(birth + i));
        const __m256d down = _mm256_sub_pd(_mm256_loadu_pd(death + i), vt);
        // minpd/maxpd return the second operand on ties; ordered to match scalar.
        const __m256d m = _mm256_min_pd(down, up);
        _mm256_storeu_pd(out + i, _mm256_max_pd(m, zero));
    }
    for (; i < n; ++i) {
        const double up = t - birth[i];
        const double down = death[i] - t;
        const double m = down < up ? down : up;
        out[i] = 0.0 < m ? m : 0.0;
    }
}

DLFM_AVX2 inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

DLFM_AVX2 double sq_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = horizontal_sum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

DLFM_AVX2 double weighted_sq_distance(const double* a, const double* b, const double* w,
                                      std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(d, d)));
    }
    double s = horizontal_sum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += w[i] * (d * d);
    }
    return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const bool supported = __builtin_cpu_supports("avx2");
    static const KernelTable table{Isa::Avx2,     "avx2", axpy,        gather_mul,
                                   gather_mul_add, tent,   sq_distance, weighted_sq_distance};
    return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace dlfm::simd
