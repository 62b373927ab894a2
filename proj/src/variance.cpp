#include "l1seg/variance.hpp"

#include <cmath>
#include <vector>

#include "l1seg/kernels.hpp"
#include "l1seg/tvdenoise.hpp"

namespace l1seg {
namespace {

std::vector<double> squared_series(std::span<const double> yv) {
  std::vector<double> z(yv.size());
  kernels::square(yv.data(), z.data(), yv.size());
  return z;
}

}  // namespace

double effective_variance_floor(const TimeSeries& y,
                                const SolverOptions& opts) {
  const auto yv = y.values();
  const double m = kernels::max_abs(yv.data(), yv.size());
  return opts.variance_floor * std::max(1.0, m * m);
}

std::pair<PiecewiseConstantSignal, SolverReport> solve_variance(
    const TimeSeries& y, double lambda2, const SolverOptions& opts) {
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
    throw std::domain_error("solve_variance: lambda2 must be finite and >= 0");
  }
  opts.validate();
  const auto yv = y.values();
  const std::size_t n = yv.size();
  const std::vector<double> z = squared_series(yv);

  PiecewiseConstantSignal s{std::vector<double>(n), SignalKind::Variance};
  detail::tv1d(z, lambda2, s.levels);

  SolverReport report;
  report.solver_name = "tv1d_dp_squared";
  report.iterations = 1;

  // Stationarity is certified on the unfloored solution; the floor only
  // rescues the open positivity constraint afterwards.
  {
    std::vector<double> grad(n);
    for (std::size_t t = 0; t < n; ++t) grad[t] = s.levels[t] - z[t];
    const auto [interior, total] = detail::chain_kkt(grad, s.levels, lambda2);
    report.kkt_residual = std::max(interior, total);
  }

  const double floor = effective_variance_floor(y, opts);
  for (double& v : s.levels) {
    if (v < floor) {
      v = floor;
      ++report.floor_hits;
    }
  }

  report.objective = 0.5 * kernels::dist2(z.data(), s.levels.data(), n) +
                     lambda2 * kernels::tv_seminorm(s.levels.data(), n);
  report.converged = report.kkt_residual <= opts.tolerance * data_scale(z);
  return {std::move(s), report};
}

double lambda_max_variance(const TimeSeries& y) {
  const auto yv = y.values();
  if (yv.size() < 2) {
    throw InputError("lambda_max_variance: need at least two samples");
  }
  return lambda_max_mean(TimeSeries(squared_series(yv)));
}

double empirical_variance(const TimeSeries& y, const SolverOptions& opts) {
  const auto yv = y.values();
  const double mean_sq =
      kernels::dot(yv.data(), yv.data(), yv.size()) /
      static_cast<double>(yv.size());
  return std::max(mean_sq, effective_variance_floor(y, opts));
}

KktResidualEta kkt_residual_eta(const TimeSeries& y,
                                const PiecewiseConstantSignal& eta,
                                double lambda2) {
  const auto yv = y.values();
  const std::size_t n = yv.size();
  if (eta.levels.size() != n) {
    throw InputError("kkt_residual_eta: candidate length mismatch");
  }
  if (!(lambda2 >= 0.0)) {
    throw std::domain_error("kkt_residual_eta: lambda2 must be >= 0");
  }
  for (double e : eta.levels) {
    if (!(e < 0.0)) {
      throw std::domain_error("kkt_residual_eta: eta levels must be < 0");
    }
  }
  // Map back to variances: gradient s_t - y_t^2. The sign pattern of
  // the eta differences equals that of the variance differences, so the
  // chain check can run on the eta sequence directly.
  std::vector<double> grad(n);
  for (std::size_t t = 0; t < n; ++t) {
    grad[t] = -1.0 / (2.0 * eta.levels[t]) - yv[t] * yv[t];
  }
  const auto [interior, total] =
      detail::chain_kkt(grad, eta.levels, lambda2);
  return KktResidualEta{interior, total};
}

}  // namespace l1seg
