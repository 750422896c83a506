#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "welfair/kernels.hpp"

// AVX2+FMA variants, 4 doubles per lane group. Reductions keep two
// accumulators to shorten the dependency chain; remainders fall back to the
// scalar reference. exp/log use the classical fdlibm range reduction and
// minimax polynomials, which stay within a few ulp of libm over the ranges
// the library feeds them (positive normal inputs for log, |x| <= 708 for
// exp); the kernel equivalence suite pins this against std::exp/std::log.

namespace welfair::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swap = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

// log for positive normal doubles.
inline __m256d v_log(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d sqrt2 = _mm256_set1_pd(1.41421356237309514547462185873883);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d lg1 = _mm256_set1_pd(6.666666666666735130e-01);
  const __m256d lg2 = _mm256_set1_pd(3.999999999940941908e-01);
  const __m256d lg3 = _mm256_set1_pd(2.857142874366239149e-01);
  const __m256d lg4 = _mm256_set1_pd(2.222219843214978396e-01);
  const __m256d lg5 = _mm256_set1_pd(1.818357216161805012e-01);
  const __m256d lg6 = _mm256_set1_pd(1.531383769920937332e-01);
  const __m256d lg7 = _mm256_set1_pd(1.479819860511658591e-01);

  __m256i bits = _mm256_castpd_si256(x);
  // biased exponent -> double via the 2^52 staging trick
  __m256i ebits = _mm256_srli_epi64(bits, 52);
  __m256i staged =
      _mm256_or_si256(ebits, _mm256_castpd_si256(_mm256_set1_pd(0x1.0p52)));
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(staged),
                            _mm256_set1_pd(0x1.0p52 + 1023.0));
  // mantissa in [1, 2)
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  __m256i mbits = _mm256_or_si256(_mm256_and_si256(bits, mant_mask),
                                  _mm256_castpd_si256(one));
  __m256d m = _mm256_castsi256_pd(mbits);
  // fold into [sqrt(2)/2, sqrt(2)]
  __m256d gt = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, half), gt);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, one), gt);

  __m256d f = _mm256_sub_pd(m, one);
  __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  __m256d z = _mm256_mul_pd(s, s);
  __m256d w = _mm256_mul_pd(z, z);
  __m256d t1 = _mm256_mul_pd(
      w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, lg6, lg4), lg2));
  __m256d t2 = _mm256_mul_pd(
      z, _mm256_fmadd_pd(
             w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, lg7, lg5), lg3), lg1));
  __m256d r = _mm256_add_pd(t1, t2);
  __m256d hfsq = _mm256_mul_pd(half, _mm256_mul_pd(f, f));
  // e*ln2_hi - ((hfsq - (s*(hfsq+r) + e*ln2_lo)) - f)
  __m256d inner = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, r),
                                  _mm256_mul_pd(e, ln2_lo));
  __m256d tail = _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f);
  return _mm256_fmsub_pd(e, ln2_hi, tail);
}

// exp with inputs clamped to [-708, 708] (callers stay far inside).
inline __m256d v_exp(__m256d x) {
  const __m256d bound = _mm256_set1_pd(708.0);
  x = _mm256_max_pd(_mm256_min_pd(x, bound), _mm256_sub_pd(_mm256_setzero_pd(), bound));

  const __m256d invln2 = _mm256_set1_pd(1.44269504088896338700e+00);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d p1 = _mm256_set1_pd(1.66666666666666019037e-01);
  const __m256d p2 = _mm256_set1_pd(-2.77777777770155933842e-03);
  const __m256d p3 = _mm256_set1_pd(6.61375632143793436117e-05);
  const __m256d p4 = _mm256_set1_pd(-1.65339022054652515390e-06);
  const __m256d p5 = _mm256_set1_pd(4.13813679705723846039e-08);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, invln2),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d hi = _mm256_fnmadd_pd(k, ln2_hi, x);  // x - k*ln2_hi
  __m256d lo = _mm256_mul_pd(k, ln2_lo);
  __m256d r = _mm256_sub_pd(hi, lo);
  __m256d t = _mm256_mul_pd(r, r);
  __m256d poly = _mm256_fmadd_pd(
      t, _mm256_fmadd_pd(t, _mm256_fmadd_pd(t, _mm256_fmadd_pd(t, p5, p4), p3), p2),
      p1);
  __m256d c = _mm256_fnmadd_pd(t, poly, r);  // r - t*poly
  __m256d num = _mm256_mul_pd(r, c);
  __m256d corr = _mm256_sub_pd(lo, _mm256_div_pd(num, _mm256_sub_pd(two, c)));
  __m256d y = _mm256_sub_pd(one, _mm256_sub_pd(corr, hi));
  // scale by 2^k through the exponent field
  __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i k64 = _mm256_cvtepi32_epi64(k32);
  __m256i scale =
      _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(y, _mm256_castsi256_pd(scale));
}

inline __m256d v_abs(__m256d x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  return _mm256_and_pd(x, mask);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double sumsq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d v0 = _mm256_loadu_pd(x + i);
    __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double reduce_min(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    m = _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
  } else {
    m = x[0];
    i = 1;
  }
  for (; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

double reduce_max(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
  } else {
    m = x[0];
    i = 1;
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

void pow_each(const double* b, double alpha, double* out, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = v_exp(_mm256_mul_pd(va, v_log(_mm256_loadu_pd(b + i))));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = std::exp(alpha * std::log(b[i]));
}

double pow_sum(const double* b, double alpha, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, v_exp(_mm256_mul_pd(va, v_log(_mm256_loadu_pd(b + i)))));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::exp(alpha * std::log(b[i]));
  return s;
}

double log_sum(const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, v_log(_mm256_loadu_pd(b + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::log(b[i]);
  return s;
}

void matvec(const double* X, const double* theta, double* out, std::size_t n,
            std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) out[i] = dot(X + i * k, theta, k);
}

void residuals(const double* X, const double* theta, const double* y,
               double* r, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) r[i] = dot(X + i * k, theta, k) - y[i];
}

void mat_t_vec(const double* X, const double* w, double* out, std::size_t n,
               std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < n; ++i) axpy(w[i], X + i * k, out, k);
}

double sq_dist(const double* a, const double* b, std::size_t k) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= k; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < k; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dwork_row(double p_i, const double* p, const double* d, std::size_t m) {
  __m256d vp = _mm256_set1_pd(p_i);
  __m256d acc = _mm256_setzero_pd();
  __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    __m256d diff = v_abs(_mm256_sub_pd(vp, _mm256_loadu_pd(p + j)));
    __m256d v = _mm256_sub_pd(diff, _mm256_loadu_pd(d + j));
    acc = _mm256_add_pd(acc, _mm256_max_pd(v, zero));
  }
  double s = hsum(acc);
  for (; j < m; ++j) {
    double v = std::fabs(p_i - p[j]) - d[j];
    if (v > 0.0) s += v;
  }
  return s;
}

}  // namespace welfair::kernels::avx2

#endif  // __AVX2__ && __FMA__
