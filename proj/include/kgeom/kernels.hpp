#pragma once

#include <complex>
#include <cstdint>
#include <string>

// Arithmetic kernels for truncated-Taylor coefficient arrays. The jet
// multiply is a sparse convolution driven by a precomputed CSR pair table;
// it dominates every curvature evaluation, so it ships as a scalar reference
// implementation plus SIMD variants selected at runtime. Variants are
// equivalence-tested against the scalar kernel.

namespace kgeom::kernels {

using cd = std::complex<double>;

enum class Kind { scalar, avx2, neon };

/// Kernel set in use. Detected once from CPU features; the scalar path is
/// always available.
Kind active();

bool supported(Kind kind);

/// Overrides the dispatch decision (tests, benchmarking). Throws
/// kgeom::BadParams if the requested kind is not supported on this CPU.
void force(Kind kind);

std::string kind_name(Kind kind);

/// out[t] = sum_k a[pair_a[k]] * b[pair_b[k]] for k in
/// [offsets[t], offsets[t+1]). `out` must not alias `a` or `b`.
void conv_mul(const std::int64_t* offsets, const std::int32_t* pair_a,
              const std::int32_t* pair_b, int n_targets, const cd* a,
              const cd* b, cd* out);

/// y[i] += s * x[i]
void axpy(cd s, const cd* x, cd* y, int n);

/// x[i] *= s
void scale(cd s, cd* x, int n);

// Direct entry points for the equivalence tests.
void conv_mul_scalar(const std::int64_t* offsets, const std::int32_t* pair_a,
                     const std::int32_t* pair_b, int n_targets, const cd* a,
                     const cd* b, cd* out);
void axpy_scalar(cd s, const cd* x, cd* y, int n);
void scale_scalar(cd s, cd* x, int n);

#if defined(__x86_64__) || defined(_M_X64)
void conv_mul_avx2(const std::int64_t* offsets, const std::int32_t* pair_a,
                   const std::int32_t* pair_b, int n_targets, const cd* a,
                   const cd* b, cd* out);
void axpy_avx2(cd s, const cd* x, cd* y, int n);
void scale_avx2(cd s, cd* x, int n);
#endif

#if defined(__aarch64__)
void conv_mul_neon(const std::int64_t* offsets, const std::int32_t* pair_a,
                   const std::int32_t* pair_b, int n_targets, const cd* a,
                   const cd* b, cd* out);
void axpy_neon(cd s, const cd* x, cd* y, int n);
void scale_neon(cd s, cd* x, int n);
#endif

}  // namespace kgeom::kernels
