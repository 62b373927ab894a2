#include "l1seg/kernels.hpp"

#include <atomic>

namespace l1seg::kernels {
namespace {

std::atomic<Backend> g_backend{Backend::Auto};

bool detect_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& resolve() {
  const Backend want = g_backend.load(std::memory_order_relaxed);
  if (want == Backend::Scalar) return scalar_ops();
  if (avx2_supported()) return avx2_ops();
  return scalar_ops();
}

}  // namespace

bool avx2_supported() {
  static const bool ok = detect_avx2();
  return ok;
}

void set_backend(Backend which) {
  g_backend.store(which, std::memory_order_relaxed);
}

const char* active_backend_name() {
  return &resolve() == &scalar_ops() ? "scalar" : "avx2";
}

bool all_finite(const double* x, std::size_t n) {
  return resolve().all_finite(x, n);
}
double sum(const double* x, std::size_t n) { return resolve().sum(x, n); }
double dot(const double* a, const double* b, std::size_t n) {
  return resolve().dot(a, b, n);
}
double sum_abs(const double* x, std::size_t n) {
  return resolve().sum_abs(x, n);
}
double max_abs(const double* x, std::size_t n) {
  return resolve().max_abs(x, n);
}
void min_max(const double* x, std::size_t n, double* lo, double* hi) {
  resolve().min_max(x, n, lo, hi);
}
double tv_seminorm(const double* x, std::size_t n) {
  return resolve().tv_seminorm(x, n);
}
void square(const double* x, double* out, std::size_t n) {
  resolve().square(x, out, n);
}
void forward_diff(const double* x, double* out, std::size_t n) {
  resolve().forward_diff(x, out, n);
}
void sub_adjoint_diff(const double* y, const double* u, double* out,
                      std::size_t n) {
  resolve().sub_adjoint_diff(y, u, out, n);
}
void box_clamp_step(double* u, const double* g, double step, double lo,
                    double hi, std::size_t n) {
  resolve().box_clamp_step(u, g, step, lo, hi, n);
}
double dist2(const double* a, const double* b, std::size_t n) {
  return resolve().dist2(a, b, n);
}

}  // namespace l1seg::kernels
