// AVX2 backend. This translation unit is compiled with -mavx2 -mfma on
// x86-64 targets; selection happens at runtime in kernels.cpp, so the
// rest of the library stays ISA-neutral.

#include <cstddef>

#include "l1seg/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace l1seg::kernels {
namespace {

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

bool v_all_finite(const double* x, std::size_t n) {
  const __m256d inf = _mm256_set1_pd(HUGE_VAL);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_andnot_pd(_mm256_set1_pd(-0.0), _mm256_loadu_pd(x + i));
    // finite <=> |x| < inf; NaN compares false either way, so require
    // all lanes to pass the ordered less-than.
    __m256d ok = _mm256_cmp_pd(v, inf, _CMP_LT_OQ);
    if (_mm256_movemask_pd(ok) != 0xF) return false;
  }
  for (; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

double v_sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double v_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double v_sum_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_and_pd(kAbsMask, _mm256_loadu_pd(x + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double v_max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_and_pd(kAbsMask, _mm256_loadu_pd(x + i)));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void v_min_max(const double* x, std::size_t n, double* lo, double* hi) {
  __m256d vmin = _mm256_set1_pd(x[0]);
  __m256d vmax = vmin;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    vmin = _mm256_min_pd(vmin, v);
    vmax = _mm256_max_pd(vmax, v);
  }
  double mn = hmin(vmin);
  double mx = hmax(vmax);
  for (; i < n; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

double v_tv_seminorm(const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 5 <= n; i += 4) {
    __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
    acc = _mm256_add_pd(acc, _mm256_and_pd(kAbsMask, d));
  }
  double s = hsum(acc);
  for (; i + 1 < n; ++i) s += std::fabs(x[i + 1] - x[i]);
  return s;
}

void v_square(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) out[i] = x[i] * x[i];
}

void v_forward_diff(const double* x, double* out, std::size_t n) {
  if (n < 2) return;
  std::size_t i = 0;
  for (; i + 5 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i + 1),
                                            _mm256_loadu_pd(x + i)));
  }
  for (; i + 1 < n; ++i) out[i] = x[i + 1] - x[i];
}

void v_sub_adjoint_diff(const double* y, const double* u, double* out,
                        std::size_t n) {
  if (n == 1) {
    out[0] = y[0];
    return;
  }
  out[0] = y[0] + u[0];
  std::size_t t = 1;
  // out[t] = y[t] - u[t-1] + u[t] for interior t; needs u[t] valid up to
  // n-2, so the vector body stops 5 short of n.
  for (; t + 5 <= n; t += 4) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(y + t), _mm256_loadu_pd(u + t - 1));
    _mm256_storeu_pd(out + t, _mm256_add_pd(v, _mm256_loadu_pd(u + t)));
  }
  for (; t + 1 < n; ++t) out[t] = y[t] - u[t - 1] + u[t];
  out[n - 1] = y[n - 1] - u[n - 2];
}

void v_box_clamp_step(double* u, const double* g, double step, double lo,
                      double hi, std::size_t n) {
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  // mul+add rather than fma keeps this bitwise identical to the scalar
  // backend, element by element.
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(u + i),
                              _mm256_mul_pd(vstep, _mm256_loadu_pd(g + i)));
    _mm256_storeu_pd(u + i, _mm256_min_pd(_mm256_max_pd(v, vlo), vhi));
  }
  for (; i < n; ++i) {
    const double v = u[i] + step * g[i];
    u[i] = std::min(std::max(v, lo), hi);
  }
}

double v_dist2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {
      v_all_finite, v_sum,          v_dot,
      v_sum_abs,    v_max_abs,      v_min_max,
      v_tv_seminorm, v_square,      v_forward_diff,
      v_sub_adjoint_diff, v_box_clamp_step, v_dist2,
  };
  return ops;
}

}  // namespace l1seg::kernels

#else  // non-x86: never selected, but keep the symbol defined.

namespace l1seg::kernels {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace l1seg::kernels

#endif
