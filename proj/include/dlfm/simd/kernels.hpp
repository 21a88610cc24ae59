#pragma once

// Inner-loop kernels with a scalar reference implementation and SIMD variants.
// Elementwise kernels are bit-identical across variants; reductions agree to
// rounding (summation order differs).

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace dlfm::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    std::string_view name;

    // y[i] += alpha * x[i]
    void (*axpy)(double* y, const double* x, double alpha, std::size_t n);

    // out[i] = a[ia[i]] * b[ib[i]]
    void (*gather_mul)(double* out, const double* a, const std::int32_t* ia,
                       const double* b, const std::int32_t* ib, std::size_t n);

    // out[i] += a[ia[i]] * b[ib[i]]; out must not alias the gathered ranges.
    void (*gather_mul_add)(double* out, const double* a, const std::int32_t* ia,
                           const double* b, const std::int32_t* ib, std::size_t n);

    // out[i] = max(0, min(t - birth[i], death[i] - t))
    void (*tent)(double* out, const double* birth, const double* death, double t,
                 std::size_t n);

    // sum (a[i] - b[i])^2
    double (*sq_distance)(const double* a, const double* b, std::size_t n);

    // sum w[i] * (a[i] - b[i])^2
    double (*weighted_sq_distance)(const double* a, const double* b, const double* w,
                                   std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant is not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();

/// Selected once: DLFM_SIMD=scalar|avx2|auto (default auto = best supported).
const KernelTable& active();

/// Override the selection (tests, benchmarks). Returns false if unsupported.
bool select(Isa isa);

}  // namespace dlfm::simd
