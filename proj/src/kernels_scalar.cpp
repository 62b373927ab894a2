#include <cmath>
#include <cstddef>

#include "l1seg/kernels.hpp"

// Reference implementations. Plain sequential loops; the AVX2 variants
// are equivalence-tested against these.

namespace l1seg::kernels {
namespace {

bool s_all_finite(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) return false;
  }
  return true;
}

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double s_sum_abs(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double s_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void s_min_max(const double* x, std::size_t n, double* lo, double* hi) {
  double mn = x[0];
  double mx = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

double s_tv_seminorm(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) acc += std::fabs(x[i + 1] - x[i]);
  return acc;
}

void s_square(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void s_forward_diff(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = x[i + 1] - x[i];
}

void s_sub_adjoint_diff(const double* y, const double* u, double* out,
                        std::size_t n) {
  if (n == 1) {
    out[0] = y[0];
    return;
  }
  out[0] = y[0] + u[0];
  for (std::size_t t = 1; t + 1 < n; ++t) out[t] = y[t] - u[t - 1] + u[t];
  out[n - 1] = y[n - 1] - u[n - 2];
}

void s_box_clamp_step(double* u, const double* g, double step, double lo,
                      double hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = u[i] + step * g[i];
    u[i] = std::min(std::max(v, lo), hi);
  }
}

double s_dist2(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      s_all_finite, s_sum,          s_dot,
      s_sum_abs,    s_max_abs,      s_min_max,
      s_tv_seminorm, s_square,      s_forward_diff,
      s_sub_adjoint_diff, s_box_clamp_step, s_dist2,
  };
  return ops;
}

}  // namespace l1seg::kernels
