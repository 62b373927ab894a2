#pragma once

#include <cstddef>

// Data-parallel primitives shared by the solvers. Every operation has a
// scalar reference implementation and, on x86-64, an AVX2 variant; the
// active backend is chosen once at runtime from CPU capabilities and can
// be overridden (tests pin both backends and compare).
//
// Chain-structured conventions, 0-based:
//   forward difference   (D x)_k   = x[k+1] - x[k],          k = 0..n-2
//   adjoint difference   (D^T u)_t = u[t-1] - u[t]           (u out of
//                         range treated as 0), so sub_adjoint_diff
//                         computes y - D^T u in one pass.

namespace l1seg::kernels {

enum class Backend { Auto, Scalar, Avx2 };

/// Force a backend. Backend::Avx2 falls back to scalar when the CPU
/// lacks AVX2. Intended for tests and benchmarks.
void set_backend(Backend which);

/// Name of the backend currently dispatched to ("scalar" or "avx2").
const char* active_backend_name();

bool avx2_supported();

bool all_finite(const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void min_max(const double* x, std::size_t n, double* lo, double* hi);
/// sum_k |x[k+1] - x[k]| (the total-variation seminorm of x).
double tv_seminorm(const double* x, std::size_t n);
/// out[i] = x[i]^2
void square(const double* x, double* out, std::size_t n);
/// out[k] = x[k+1] - x[k], out has length n-1.
void forward_diff(const double* x, double* out, std::size_t n);
/// out = y - D^T u; y has length n, u length n-1.
void sub_adjoint_diff(const double* y, const double* u, double* out,
                      std::size_t n);
/// u[k] = clamp(u[k] + step * g[k], lo, hi)
void box_clamp_step(double* u, const double* g, double step, double lo,
                    double hi, std::size_t n);
/// sum_i (a[i] - b[i])^2
double dist2(const double* a, const double* b, std::size_t n);

/// Raw backend tables, exposed so equivalence tests can call both sides
/// directly regardless of the dispatched choice.
struct Ops {
  bool (*all_finite)(const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*min_max)(const double*, std::size_t, double*, double*);
  double (*tv_seminorm)(const double*, std::size_t);
  void (*square)(const double*, double*, std::size_t);
  void (*forward_diff)(const double*, double*, std::size_t);
  void (*sub_adjoint_diff)(const double*, const double*, double*, std::size_t);
  void (*box_clamp_step)(double*, const double*, double, double, double,
                         std::size_t);
  double (*dist2)(const double*, const double*, std::size_t);
};

const Ops& scalar_ops();
const Ops& avx2_ops();  // valid only when avx2_supported()

}  // namespace l1seg::kernels
