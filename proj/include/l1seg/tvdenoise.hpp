#pragma once

#include <span>
#include <utility>

#include "l1seg/core.hpp"

namespace l1seg {

/// Violations of the partial-sum optimality conditions for the
/// piecewise-constant mean fit. Both are zero (to rounding) at the
/// unique minimizer.
struct KktResidualMean {
  /// Worst violation over k = 1..N-1 of the interior conditions.
  double max_interior_violation = 0.0;
  /// |sum_t (y_t - m_t)|, the full-sum condition.
  double total_sum_violation = 0.0;
};

/// Exact solution of
///   minimize_m  1/2 sum_t (y_t - m_t)^2 + lambda1 * sum_t |m_t - m_{t-1}|
/// by a single forward/backward pass (clipped-derivative dynamic
/// programming, cf. N. A. Johnson, JCGS 2013). O(N) time and memory.
std::pair<PiecewiseConstantSignal, SolverReport> solve_mean(
    const TimeSeries& y, double lambda1,
    const SolverOptions& opts = SolverOptions{});

/// Smallest penalty at which the solution collapses to the constant
/// empirical mean:
///   max_{k=1..N-1} | sum_{t<=k} y_t - (k/N) sum_t y_t |.
/// Requires N >= 2.
double lambda_max_mean(const TimeSeries& y);

/// (1/N) sum_t y_t.
double empirical_mean(const TimeSeries& y);

/// Evaluates the partial-sum optimality conditions at an arbitrary
/// candidate m. With c_k = sum_{t<=k} (y_t - m_t):
///   m_{k+1} != m_k  ->  |c_k + lambda1 * sign(m_{k+1} - m_k)|
///   m_{k+1} == m_k  ->  max(0, |c_k| - lambda1)
/// and the full-sum violation |c_N|. The sign orientation comes from
/// differentiating the quadratic data term (gradient m_t - y_t) and
/// telescoping the TV subgradient.
KktResidualMean kkt_residual_mean(const TimeSeries& y,
                                  const PiecewiseConstantSignal& m,
                                  double lambda1);

namespace detail {

/// Core 1-D total-variation denoiser on raw spans; out = argmin of the
/// objective above. Used directly by the variance path and as the TV
/// proximal map inside the splitting solvers.
void tv1d(std::span<const double> y, double lambda, std::span<double> out);

/// Generic chain KKT evaluation: given the per-sample gradient g_t of a
/// smooth data term and a candidate level sequence x, checks
///   sum_{t<=k} g_t = lambda * sign(x_{k+1} - x_k)   (x_{k+1} != x_k)
///   |sum_{t<=k} g_t| <= lambda                      (x_{k+1} == x_k)
///   sum_{t<=N} g_t = 0.
/// Returns {max interior violation, total-sum violation}.
std::pair<double, double> chain_kkt(std::span<const double> grad,
                                    std::span<const double> x, double lambda);

}  // namespace detail

}  // namespace l1seg
