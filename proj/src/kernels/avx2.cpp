#include "clt/kernels.hpp"

#if defined(CLT_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"

namespace clt::kernels {
namespace {

using detail::two_sum;

// Two complex products per register: (a0*b0, a1*b1).
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);
  const __m256d bi = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(a_swap, bi));
}

inline __m256d abs4(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline void two_sum4(__m256d a, __m256d b, __m256d& s, __m256d& err) {
  s = _mm256_add_pd(a, b);
  const __m256d bp = _mm256_sub_pd(s, a);
  err = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bp)), _mm256_sub_pd(b, bp));
}

void fft_stage(cplx* data, std::size_t size, std::size_t half, const cplx* tw) {
  auto* a = reinterpret_cast<double*>(data);
  const auto* w = reinterpret_cast<const double*>(tw);
  if (half == 1) {
    for (std::size_t k = 0; k < size; k += 2) {
      double* u = a + 2 * k;
      const double ur = u[0], ui = u[1], vr = u[2], vi = u[3];
      u[0] = ur + vr;
      u[1] = ui + vi;
      u[2] = ur - vr;
      u[3] = ui - vi;
    }
    return;
  }
  for (std::size_t start = 0; start < size; start += 2 * half) {
    double* lo = a + 2 * start;
    double* hi = a + 2 * (start + half);
    for (std::size_t j = 0; j < half; j += 2) {
      const __m256d t = cmul2(_mm256_loadu_pd(hi + 2 * j), _mm256_loadu_pd(w + 2 * j));
      const __m256d u = _mm256_loadu_pd(lo + 2 * j);
      _mm256_storeu_pd(lo + 2 * j, _mm256_add_pd(u, t));
      _mm256_storeu_pd(hi + 2 * j, _mm256_sub_pd(u, t));
    }
  }
}

void pow_accumulate(const cplx* base, cplx* acc, std::size_t count, std::uint64_t exponent) {
  const auto* b = reinterpret_cast<const double*>(base);
  auto* out = reinterpret_cast<double*>(acc);
  const __m256d one = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    __m256d x = _mm256_loadu_pd(b + 2 * i);
    __m256d r = one;
    for (std::uint64_t e = exponent;;) {
      if (e & 1u) r = cmul2(r, x);
      e >>= 1;
      if (e == 0) break;
      x = cmul2(x, x);
    }
    _mm256_storeu_pd(out + 2 * i, _mm256_add_pd(_mm256_loadu_pd(out + 2 * i), r));
  }
  if (i < count) scalar_table().pow_accumulate(base + i, acc + i, count - i, exponent);
}

void mul_inplace(cplx* a, const cplx* b, std::size_t count) {
  auto* x = reinterpret_cast<double*>(a);
  const auto* y = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2)
    _mm256_storeu_pd(x + 2 * i, cmul2(_mm256_loadu_pd(x + 2 * i), _mm256_loadu_pd(y + 2 * i)));
  if (i < count) scalar_table().mul_inplace(a + i, b + i, count - i);
}

double finish(__m256d s4, __m256d c4, const double* tail_a, const double* tail_b,
              std::size_t tail) {
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, s4);
  _mm256_store_pd(c, c4);
  for (std::size_t l = 0; l < tail; ++l) {
    double e;
    if (tail_b) {
      const double p = tail_a[l] * tail_b[l];
      const double pe = std::fma(tail_a[l], tail_b[l], -p);
      two_sum(s[l], p, s[l], e);
      c[l] += e + pe;
    } else {
      two_sum(s[l], tail_a[l], s[l], e);
      c[l] += e;
    }
  }
  return detail::fold_lanes(s, c);
}

double sum(const double* v, std::size_t count) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d e;
    two_sum4(s, _mm256_loadu_pd(v + i), s, e);
    c = _mm256_add_pd(c, e);
  }
  return finish(s, c, v + i, nullptr, count - i);
}

double dot(const double* a, const double* b, std::size_t count) {
  __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d x = _mm256_loadu_pd(a + i), y = _mm256_loadu_pd(b + i);
    const __m256d p = _mm256_mul_pd(x, y);
    const __m256d pe = _mm256_fmsub_pd(x, y, p);
    __m256d e;
    two_sum4(s, p, s, e);
    c = _mm256_add_pd(c, _mm256_add_pd(e, pe));
  }
  return finish(s, c, a + i, b + i, count - i);
}

double clip_negatives(double* v, std::size_t count) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d lo4 = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    lo4 = _mm256_min_pd(lo4, x);
    _mm256_storeu_pd(v + i, _mm256_max_pd(x, zero));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, lo4);
  double lo = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  if (i < count) lo = std::min(lo, scalar_table().clip_negatives(v + i, count - i));
  return lo;
}

double lemma6_row_min(double q, double b_i, double p_i, const double* b, const double* p,
                      std::size_t count) {
  const __m256d q4 = _mm256_set1_pd(q), bi4 = _mm256_set1_pd(b_i), pi4 = _mm256_set1_pd(p_i);
  __m256d lo4 = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d bj = _mm256_loadu_pd(b + j), pj = _mm256_loadu_pd(p + j);
    const __m256d lhs = _mm256_mul_pd(q4, abs4(_mm256_sub_pd(bi4, bj)));
    const __m256d rhs = abs4(_mm256_sub_pd(_mm256_mul_pd(pi4, bj), _mm256_mul_pd(pj, bi4)));
    lo4 = _mm256_min_pd(lo4, _mm256_sub_pd(lhs, rhs));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, lo4);
  double lo = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  if (j < count)
    lo = std::min(lo, scalar_table().lemma6_row_min(q, b_i, p_i, b + j, p + j, count - j));
  return lo;
}

}  // namespace

const Table* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const Table table{Isa::avx2, "avx2", fft_stage,      pow_accumulate, mul_inplace,
                           sum,       dot,    clip_negatives, lemma6_row_min};
  return supported ? &table : nullptr;
}

}  // namespace clt::kernels

#else

namespace clt::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace clt::kernels

#endif
