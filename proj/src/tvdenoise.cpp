#include "l1seg/tvdenoise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "l1seg/kernels.hpp"

namespace l1seg {
namespace detail {

// Clipped-derivative dynamic programming for the 1-D fused-lasso /
// total-variation problem (N. A. Johnson, "A dynamic programming
// algorithm for the fused lasso and L0-segmentation", JCGS 2013).
//
// Forward pass: maintain the derivative of the running value function
// as a piecewise-linear increasing function, represented by knot
// positions plus the (slope, intercept) increments gained when crossing
// each knot rightward. Adding a sample adds a unit-slope affine term;
// the TV coupling clips the derivative to [-lambda, lambda], which pops
// knots off either end and records the two clip locations. Backward
// pass: each level is the next level clipped to its recorded window.
// Every knot is pushed and popped at most once, so the whole solve is
// O(N) despite the inner scans.
void tv1d(std::span<const double> y, double lambda, std::span<double> out) {
  const std::size_t n = y.size();
  if (n == 0) return;
  if (n == 1 || lambda == 0.0) {
    std::copy(y.begin(), y.end(), out.begin());
    return;
  }

  std::vector<double> knot(2 * n);
  std::vector<double> dslope(2 * n);  // slope gained crossing knot[i]
  std::vector<double> dicept(2 * n);  // intercept gained crossing knot[i]
  std::vector<double> clip_lo(n - 1);
  std::vector<double> clip_hi(n - 1);

  // First sample, clipped by hand.
  clip_lo[0] = y[0] - lambda;
  clip_hi[0] = y[0] + lambda;
  std::size_t l = n - 1;
  std::size_t r = n;
  knot[l] = clip_lo[0];
  knot[r] = clip_hi[0];
  dslope[l] = 1.0;
  dicept[l] = -y[0] + lambda;
  dslope[r] = -1.0;
  dicept[r] = y[0] + lambda;
  // Derivative left of knot[l] is left_s*theta + left_c; right of
  // knot[r] the *negated* derivative is right_s*theta + right_c.
  double left_s = 1.0;
  double left_c = -y[1] - lambda;
  double right_s = -1.0;
  double right_c = y[1] - lambda;

  for (std::size_t k = 1; k + 1 < n; ++k) {
    // Scan up from the left until the derivative exceeds -lambda.
    double s = left_s;
    double c = left_c;
    std::size_t lo = l;
    for (; lo <= r; ++lo) {
      if (s * knot[lo] + c > -lambda) break;
      s += dslope[lo];
      c += dicept[lo];
    }
    clip_lo[k] = (-lambda - c) / s;

    // Scan down from the right until the derivative drops below lambda.
    double ns = right_s;
    double nc = right_c;
    std::size_t hi = r;
    for (; hi >= lo; --hi) {
      if (-(ns * knot[hi] + nc) < lambda) break;
      ns += dslope[hi];
      nc += dicept[hi];
    }
    clip_hi[k] = (lambda + nc) / (-ns);

    l = lo - 1;
    knot[l] = clip_lo[k];
    dslope[l] = s;
    dicept[l] = c + lambda;
    r = hi + 1;
    knot[r] = clip_hi[k];
    dslope[r] = ns;
    dicept[r] = nc + lambda;

    left_s = 1.0;
    left_c = -y[k + 1] - lambda;
    right_s = -1.0;
    right_c = y[k + 1] - lambda;
  }

  // Final sample: find the zero of the total derivative.
  double s = left_s;
  double c = left_c;
  std::size_t lo = l;
  for (; lo <= r; ++lo) {
    if (s * knot[lo] + c > 0.0) break;
    s += dslope[lo];
    c += dicept[lo];
  }
  out[n - 1] = -c / s;

  for (std::size_t k = n - 1; k-- > 0;) {
    out[k] = std::min(std::max(out[k + 1], clip_lo[k]), clip_hi[k]);
  }
}

std::pair<double, double> chain_kkt(std::span<const double> grad,
                                    std::span<const double> x, double lambda) {
  const std::size_t n = grad.size();
  double csum = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    csum += grad[k];
    double violation;
    if (x[k + 1] != x[k]) {
      const double sign = x[k + 1] > x[k] ? 1.0 : -1.0;
      violation = std::fabs(csum - lambda * sign);
    } else {
      violation = std::max(0.0, std::fabs(csum) - lambda);
    }
    worst = std::max(worst, violation);
  }
  csum += grad[n - 1];
  return {worst, std::fabs(csum)};
}

}  // namespace detail

std::pair<PiecewiseConstantSignal, SolverReport> solve_mean(
    const TimeSeries& y, double lambda1, const SolverOptions& opts) {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) {
    throw std::domain_error("solve_mean: lambda1 must be finite and >= 0");
  }
  opts.validate();
  const auto yv = y.values();
  const std::size_t n = yv.size();

  PiecewiseConstantSignal m{std::vector<double>(n), SignalKind::Mean};
  detail::tv1d(yv, lambda1, m.levels);

  // The minimizer lies in [min y, max y]; clamp away rounding dust so
  // the containment holds exactly.
  double lo, hi;
  kernels::min_max(yv.data(), n, &lo, &hi);
  for (double& v : m.levels) v = std::min(std::max(v, lo), hi);

  SolverReport report;
  report.solver_name = "tv1d_dp";
  report.iterations = 1;
  report.objective = 0.5 * kernels::dist2(yv.data(), m.levels.data(), n) +
                     lambda1 * kernels::tv_seminorm(m.levels.data(), n);
  const auto kkt = kkt_residual_mean(y, m, lambda1);
  report.kkt_residual =
      std::max(kkt.max_interior_violation, kkt.total_sum_violation);
  report.converged = report.kkt_residual <= opts.tolerance * data_scale(yv);
  return {std::move(m), report};
}

double lambda_max_mean(const TimeSeries& y) {
  const auto yv = y.values();
  const std::size_t n = yv.size();
  if (n < 2) {
    throw InputError("lambda_max_mean: need at least two samples");
  }
  const double total = kernels::sum(yv.data(), n);
  double partial = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    partial += yv[k];
    const double deviation =
        partial - (static_cast<double>(k + 1) / static_cast<double>(n)) * total;
    best = std::max(best, std::fabs(deviation));
  }
  return best;
}

double empirical_mean(const TimeSeries& y) {
  const auto yv = y.values();
  return kernels::sum(yv.data(), yv.size()) / static_cast<double>(yv.size());
}

KktResidualMean kkt_residual_mean(const TimeSeries& y,
                                  const PiecewiseConstantSignal& m,
                                  double lambda1) {
  const auto yv = y.values();
  if (m.levels.size() != yv.size()) {
    throw InputError("kkt_residual_mean: candidate length mismatch");
  }
  if (!(lambda1 >= 0.0)) {
    throw std::domain_error("kkt_residual_mean: lambda1 must be >= 0");
  }
  // Smooth gradient of the data term is m_t - y_t.
  std::vector<double> grad(yv.size());
  for (std::size_t t = 0; t < yv.size(); ++t) grad[t] = m.levels[t] - yv[t];
  const auto [interior, total] = detail::chain_kkt(grad, m.levels, lambda1);
  return KktResidualMean{interior, total};
}

}  // namespace l1seg
