#pragma once

#include <utility>

#include "l1seg/core.hpp"

namespace l1seg {

/// Violations of the stationarity conditions of the canonical-eta
/// formulation of the variance problem, evaluated in partial-sum form.
struct KktResidualEta {
  double max_interior_violation = 0.0;
  double total_sum_violation = 0.0;
};

/// Variance segmentation for zero-mean data (centering, when wanted, is
/// the caller's job):
///   minimize 1/2 sum_t (y_t^2 - s_t)^2 + lambda2 * sum_t |s_t - s_{t-1}|,
///   s_t > 0.
/// Solved by mean-filtering the squared series, then flooring at the
/// effective variance floor. Floor activations are counted in the
/// report.
std::pair<PiecewiseConstantSignal, SolverReport> solve_variance(
    const TimeSeries& y, double lambda2,
    const SolverOptions& opts = SolverOptions{});

/// Constancy threshold: lambda_max_mean of the squared series.
double lambda_max_variance(const TimeSeries& y);

/// (1/N) sum_t y_t^2, floored at the effective variance floor.
double empirical_variance(const TimeSeries& y,
                          const SolverOptions& opts = SolverOptions{});

/// Stationarity check of the eta-parametrized problem at a candidate
/// eta < 0. With s_t = -1/(2 eta_t), the smooth gradient is s_t - y_t^2
/// and the TV subgradient signs follow the eta differences (which match
/// the s differences). Partial-sum violations as in kkt_residual_mean.
KktResidualEta kkt_residual_eta(const TimeSeries& y,
                                const PiecewiseConstantSignal& eta,
                                double lambda2);

/// Effective floor used by the variance path:
/// opts.variance_floor * max(1, max_t y_t^2).
double effective_variance_floor(const TimeSeries& y, const SolverOptions& opts);

}  // namespace l1seg
