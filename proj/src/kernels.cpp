#include "kgeom/kernels.hpp"

#include <mutex>

#include "kgeom/errors.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace kgeom::kernels {

namespace {

Kind g_active = Kind::scalar;
std::once_flag g_detect_once;

Kind detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return Kind::avx2;
  return Kind::scalar;
#elif defined(__aarch64__)
  return Kind::neon;
#else
  return Kind::scalar;
#endif
}

void ensure_detected() {
  std::call_once(g_detect_once, [] { g_active = detect(); });
}

}  // namespace

Kind active() {
  ensure_detected();
  return g_active;
}

bool supported(Kind kind) {
  switch (kind) {
    case Kind::scalar:
      return true;
    case Kind::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Kind::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

void force(Kind kind) {
  ensure_detected();
  if (!supported(kind)) throw BadParams("kernel kind not supported on this CPU: " + kind_name(kind));
  g_active = kind;
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::scalar: return "scalar";
    case Kind::avx2: return "avx2";
    case Kind::neon: return "neon";
  }
  return "unknown";
}

void conv_mul_scalar(const std::int64_t* offsets, const std::int32_t* pair_a,
                     const std::int32_t* pair_b, int n_targets, const cd* a,
                     const cd* b, cd* out) {
  for (int t = 0; t < n_targets; ++t) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::int64_t k = offsets[t]; k < offsets[t + 1]; ++k) {
      const cd& x = a[pair_a[k]];
      const cd& y = b[pair_b[k]];
      acc_re += x.real() * y.real() - x.imag() * y.imag();
      acc_im += x.real() * y.imag() + x.imag() * y.real();
    }
    out[t] = cd(acc_re, acc_im);
  }
}

void axpy_scalar(cd s, const cd* x, cd* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += s * x[i];
}

void scale_scalar(cd s, cd* x, int n) {
  for (int i = 0; i < n; ++i) x[i] *= s;
}

#if defined(__x86_64__) || defined(_M_X64)

__attribute__((target("avx2"))) static inline __m256d cmul2(__m256d a, __m256d b) {
  // Interleaved (re, im | re, im) complex multiply: addsub pairs the
  // re*re - im*im / re*im + im*re lanes.
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

__attribute__((target("avx2")))
void conv_mul_avx2(const std::int64_t* offsets, const std::int32_t* pair_a,
                   const std::int32_t* pair_b, int n_targets, const cd* a,
                   const cd* b, cd* out) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  for (int t = 0; t < n_targets; ++t) {
    const std::int64_t begin = offsets[t];
    const std::int64_t end = offsets[t + 1];
    __m256d acc = _mm256_setzero_pd();
    std::int64_t k = begin;
    for (; k + 2 <= end; k += 2) {
      const __m128d a0 = _mm_loadu_pd(ad + 2 * pair_a[k]);
      const __m128d a1 = _mm_loadu_pd(ad + 2 * pair_a[k + 1]);
      const __m128d b0 = _mm_loadu_pd(bd + 2 * pair_b[k]);
      const __m128d b1 = _mm_loadu_pd(bd + 2 * pair_b[k + 1]);
      const __m256d av = _mm256_set_m128d(a1, a0);
      const __m256d bv = _mm256_set_m128d(b1, b0);
      acc = _mm256_add_pd(acc, cmul2(av, bv));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double acc_re = lanes[0] + lanes[2];
    double acc_im = lanes[1] + lanes[3];
    for (; k < end; ++k) {
      const cd& x = a[pair_a[k]];
      const cd& y = b[pair_b[k]];
      acc_re += x.real() * y.real() - x.imag() * y.imag();
      acc_im += x.real() * y.imag() + x.imag() * y.real();
    }
    out[t] = cd(acc_re, acc_im);
  }
}

__attribute__((target("avx2")))
void axpy_avx2(cd s, const cd* x, cd* y, int n) {
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul2(xv, sv)));
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

__attribute__((target("avx2")))
void scale_avx2(cd s, cd* x, int n) {
  const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
  double* xd = reinterpret_cast<double*>(x);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, cmul2(xv, sv));
  }
  for (; i < n; ++i) x[i] *= s;
}

#endif  // x86_64

#if defined(__aarch64__)

static inline float64x2_t cmul1(float64x2_t a, float64x2_t b) {
  const float64x2_t b_re = vdupq_laneq_f64(b, 0);
  const float64x2_t b_im = vdupq_laneq_f64(b, 1);
  const float64x2_t a_sw = vextq_f64(a, a, 1);
  const float64x2_t t0 = vmulq_f64(a, b_re);
  const float64x2_t t1 = vmulq_f64(a_sw, b_im);
  const float64x2_t sign = {-1.0, 1.0};
  return vaddq_f64(t0, vmulq_f64(t1, sign));
}

void conv_mul_neon(const std::int64_t* offsets, const std::int32_t* pair_a,
                   const std::int32_t* pair_b, int n_targets, const cd* a,
                   const cd* b, cd* out) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  for (int t = 0; t < n_targets; ++t) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::int64_t k = offsets[t]; k < offsets[t + 1]; ++k) {
      const float64x2_t av = vld1q_f64(ad + 2 * pair_a[k]);
      const float64x2_t bv = vld1q_f64(bd + 2 * pair_b[k]);
      acc = vaddq_f64(acc, cmul1(av, bv));
    }
    double lanes[2];
    vst1q_f64(lanes, acc);
    out[t] = cd(lanes[0], lanes[1]);
  }
}

void axpy_neon(cd s, const cd* x, cd* y, int n) {
  const float64x2_t sv = {s.real(), s.imag()};
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  for (int i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    vst1q_f64(yd + 2 * i, vaddq_f64(yv, cmul1(xv, sv)));
  }
}

void scale_neon(cd s, cd* x, int n) {
  const float64x2_t sv = {s.real(), s.imag()};
  double* xd = reinterpret_cast<double*>(x);
  for (int i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    vst1q_f64(xd + 2 * i, cmul1(xv, sv));
  }
}

#endif  // aarch64

void conv_mul(const std::int64_t* offsets, const std::int32_t* pair_a,
              const std::int32_t* pair_b, int n_targets, const cd* a,
              const cd* b, cd* out) {
  switch (active()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Kind::avx2:
      conv_mul_avx2(offsets, pair_a, pair_b, n_targets, a, b, out);
      return;
#endif
#if defined(__aarch64__)
    case Kind::neon:
      conv_mul_neon(offsets, pair_a, pair_b, n_targets, a, b, out);
      return;
#endif
    default:
      conv_mul_scalar(offsets, pair_a, pair_b, n_targets, a, b, out);
      return;
  }
}

void axpy(cd s, const cd* x, cd* y, int n) {
  switch (active()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Kind::avx2:
      axpy_avx2(s, x, y, n);
      return;
#endif
#if defined(__aarch64__)
    case Kind::neon:
      axpy_neon(s, x, y, n);
      return;
#endif
    default:
      axpy_scalar(s, x, y, n);
      return;
  }
}

void scale(cd s, cd* x, int n) {
  switch (active()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Kind::avx2:
      scale_avx2(s, x, n);
      return;
#endif
#if defined(__aarch64__)
    case Kind::neon:
      scale_neon(s, x, n);
      return;
#endif
    default:
      scale_scalar(s, x, n);
      return;
  }
}

}  // namespace kgeom::kernels
