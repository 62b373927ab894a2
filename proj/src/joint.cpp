#include "l1seg/joint.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "l1seg/kernels.hpp"
#include "l1seg/tvdenoise.hpp"
#include "l1seg/variance.hpp"

namespace l1seg {
namespace {

void check_canonical_args(std::span<const double> mu,
                          std::span<const double> eta, std::size_t n) {
  if (mu.size() != n || eta.size() != n) {
    throw InputError("joint: mu/eta length mismatch with data");
  }
  for (double e : eta) {
    if (!(e < 0.0)) {
      throw std::domain_error("joint: eta levels must be < 0");
    }
  }
}

struct NewtonResult {
  double mu;
  double eta;
};

// Minimizes the per-sample smooth block
//   -ln(-eta)/2 - mu^2/(4 eta) - eta y^2 - mu y
//   + rho/2 [(mu - p)^2 + (eta - q)^2]
// over eta in [eta_lo, eta_hi], eta_hi < 0. Newton with halving
// backtracking that keeps eta strictly negative; if the box binds, mu
// is re-solved in closed form at the clamped eta.
NewtonResult solve_sample_block(double y, double p, double q, double rho,
                                double mu0, double eta0, double eta_lo,
                                double eta_hi) {
  double mu = mu0;
  double eta = std::min(std::max(eta0, eta_lo), eta_hi);

  const double gtol = 1e-10 * (1.0 + std::fabs(y) + y * y + rho);
  for (int it = 0; it < 50; ++it) {
    const double inv = 1.0 / eta;
    const double gmu = -0.5 * mu * inv - y + rho * (mu - p);
    const double geta =
        -0.5 * inv + 0.25 * mu * mu * inv * inv - y * y + rho * (eta - q);
    if (std::fabs(gmu) <= gtol && std::fabs(geta) <= gtol) break;

    const double hmm = -0.5 * inv + rho;
    const double hme = 0.5 * mu * inv * inv;
    const double hee =
        0.5 * inv * inv - 0.5 * mu * mu * inv * inv * inv + rho;
    const double det = hmm * hee - hme * hme;
    double dmu = -(hee * gmu - hme * geta) / det;
    double deta = -(hmm * geta - hme * gmu) / det;

    double step = 1.0;
    // Stay strictly inside the domain; the log barrier blows up at 0.
    while (eta + step * deta >= 0.5 * eta_hi && step > 1e-16) step *= 0.5;

    const double phi0 = -0.5 * std::log(-eta) - 0.25 * mu * mu * inv -
                        eta * y * y - mu * y +
                        0.5 * rho * ((mu - p) * (mu - p) + (eta - q) * (eta - q));
    const double slope = gmu * dmu + geta * deta;
    for (int bt = 0; bt < 60; ++bt) {
      const double mu_n = mu + step * dmu;
      const double eta_n = eta + step * deta;
      const double phi_n = -0.5 * std::log(-eta_n) -
                           0.25 * mu_n * mu_n / eta_n - eta_n * y * y -
                           mu_n * y +
                           0.5 * rho * ((mu_n - p) * (mu_n - p) +
                                        (eta_n - q) * (eta_n - q));
      if (phi_n <= phi0 + 0.25 * step * slope) break;
      step *= 0.5;
    }
    mu += step * dmu;
    eta += step * deta;
    if (eta < eta_lo) eta = eta_lo;
    if (eta > eta_hi) eta = eta_hi;
  }

  if (eta <= eta_lo || eta >= eta_hi) {
    // Box active: exact mu at the clamped eta.
    eta = std::min(std::max(eta, eta_lo), eta_hi);
    mu = (y + rho * p) / (rho - 0.5 / eta);
  }
  return {mu, eta};
}

// Worst violation of the coupled partial-sum optimality conditions at a
// candidate (mu, eta): each chain is checked against its own penalty
// with the cross-terms entering through the smooth gradient.
double joint_kkt_residual(const TimeSeries& y, std::span<const double> mu,
                          std::span<const double> eta,
                          const Hyperparams& params) {
  const std::size_t n = y.size();
  std::vector<double> gmu(n), geta(n);
  neg_log_likelihood_gradient(mu, eta, y, gmu, geta);
  const auto [mi, mt] = detail::chain_kkt(gmu, mu, params.lambda1);
  const auto [ei, et] = detail::chain_kkt(geta, eta, params.lambda2);
  return std::max(std::max(mi, mt), std::max(ei, et));
}

}  // namespace

double eta_epsilon(const TimeSeries& y) {
  const auto yv = y.values();
  const double m = kernels::max_abs(yv.data(), yv.size());
  const double v_max = 1e6 * std::max(1.0, m * m);
  return 1.0 / (2.0 * v_max);
}

double neg_log_likelihood(std::span<const double> mu,
                          std::span<const double> eta, const TimeSeries& y) {
  const auto yv = y.values();
  const std::size_t n = yv.size();
  check_canonical_args(mu, eta, n);
  double cost = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    cost += -0.5 * std::log(-eta[t]) - 0.25 * mu[t] * mu[t] / eta[t] -
            eta[t] * yv[t] * yv[t] - mu[t] * yv[t];
  }
  return cost;
}

void neg_log_likelihood_gradient(std::span<const double> mu,
                                 std::span<const double> eta,
                                 const TimeSeries& y, std::span<double> gmu,
                                 std::span<double> geta) {
  const auto yv = y.values();
  const std::size_t n = yv.size();
  check_canonical_args(mu, eta, n);
  if (gmu.size() != n || geta.size() != n) {
    throw InputError("joint: gradient output length mismatch");
  }
  for (std::size_t t = 0; t < n; ++t) {
    const double inv = 1.0 / eta[t];
    gmu[t] = -0.5 * mu[t] * inv - yv[t];
    geta[t] = -0.5 * inv + 0.25 * mu[t] * mu[t] * inv * inv - yv[t] * yv[t];
  }
}

double joint_objective(std::span<const double> mu, std::span<const double> eta,
                       const TimeSeries& y, const Hyperparams& params) {
  const std::size_t n = y.size();
  return neg_log_likelihood(mu, eta, y) +
         params.lambda1 * kernels::tv_seminorm(mu.data(), n) +
         params.lambda2 * kernels::tv_seminorm(eta.data(), n);
}

std::pair<JointEstimate, SolverReport> solve_joint(const TimeSeries& y,
                                                   const Hyperparams& params,
                                                   const SolverOptions& opts) {
  params.validate();
  opts.validate();
  const auto yv = y.values();
  const std::size_t n = yv.size();
  if (n < 2) {
    throw InputError("solve_joint: need at least two samples");
  }
  if ((params.lambda1 == 0.0 || params.lambda2 == 0.0) && !opts.eta_min) {
    throw DegeneracyError(
        "solve_joint: an unpenalized chain lets per-sample variances "
        "collapse; supply opts.eta_min to bound the domain explicitly");
  }

  const double eta_hi = -eta_epsilon(y);
  const double eta_lo =
      opts.eta_min ? *opts.eta_min : -std::numeric_limits<double>::infinity();
  if (eta_lo >= eta_hi) {
    throw std::domain_error("solve_joint: eta_min above the eta ceiling");
  }

  SolverReport report;
  report.solver_name = "joint_admm_newton";

  // Windowed-moment initialization mapped through the canonical
  // transform; windows keep the start feasible and data-scaled.
  const std::size_t window = std::min<std::size_t>(25, n);
  const double var_floor = effective_variance_floor(y, opts);
  std::vector<double> xmu(n), xeta(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t lo = t >= window / 2 ? t - window / 2 : 0;
    lo = std::min(lo, n - window);
    const double* chunk = yv.data() + lo;
    const double mean = kernels::sum(chunk, window) / window;
    double var =
        kernels::dot(chunk, chunk, window) / window - mean * mean;
    if (var < var_floor) {
      var = var_floor;
      ++report.floor_hits;
    }
    const Canonical c = to_canonical(mean, var);
    xmu[t] = c.mu;
    xeta[t] = std::min(std::max(c.eta, eta_lo), eta_hi);
  }

  std::vector<double> zmu = xmu, zeta = xeta;
  std::vector<double> umu(n, 0.0), ueta(n, 0.0);
  std::vector<double> zmu_prev(n), zeta_prev(n), tmp(n);

  double rho = opts.penalty_parameter;
  const double kkt_scale = 1.0 + kernels::max_abs(yv.data(), n) *
                                     kernels::max_abs(yv.data(), n);
  const double kkt_target = opts.tolerance * kkt_scale;

  double kkt = std::numeric_limits<double>::infinity();
  std::int64_t it = 0;
  for (; it < opts.max_iterations; ++it) {
    // Smooth block: independent per-sample 2-D Newton solves.
    for (std::size_t t = 0; t < n; ++t) {
      const NewtonResult r =
          solve_sample_block(yv[t], zmu[t] - umu[t], zeta[t] - ueta[t], rho,
                             xmu[t], xeta[t], eta_lo, eta_hi);
      xmu[t] = r.mu;
      xeta[t] = r.eta;
      // The smooth block must never leave the domain.
      if (!(xeta[t] < 0.0)) {
        throw std::logic_error("solve_joint: eta iterate left the domain");
      }
    }

    // TV block: exact proximal maps on each chain.
    zmu_prev.swap(zmu);
    zeta_prev.swap(zeta);
    for (std::size_t t = 0; t < n; ++t) tmp[t] = xmu[t] + umu[t];
    detail::tv1d(tmp, params.lambda1 / rho, zmu);
    for (std::size_t t = 0; t < n; ++t) tmp[t] = xeta[t] + ueta[t];
    detail::tv1d(tmp, params.lambda2 / rho, zeta);

    for (std::size_t t = 0; t < n; ++t) {
      umu[t] += xmu[t] - zmu[t];
      ueta[t] += xeta[t] - zeta[t];
    }

    if (it % 10 == 9 || it + 1 == opts.max_iterations) {
      // Certify optimality on the consensus point (its plateaus are
      // exact); the eta chain is clamped into the domain first.
      for (std::size_t t = 0; t < n; ++t) {
        tmp[t] = std::min(zeta[t], eta_hi);
      }
      kkt = joint_kkt_residual(y, zmu, tmp, params);
      const double pri =
          std::sqrt(kernels::dist2(xmu.data(), zmu.data(), n) +
                    kernels::dist2(xeta.data(), zeta.data(), n));
      if (kkt <= kkt_target && pri <= kkt_target) {
        ++it;
        break;
      }
      if (opts.adapt_penalty) {
        const double dual =
            rho * std::sqrt(kernels::dist2(zmu.data(), zmu_prev.data(), n) +
                            kernels::dist2(zeta.data(), zeta_prev.data(), n));
        if (pri > 10.0 * dual) {
          rho *= 2.0;
          for (std::size_t t = 0; t < n; ++t) {
            umu[t] *= 0.5;
            ueta[t] *= 0.5;
          }
        } else if (dual > 10.0 * pri) {
          rho *= 0.5;
          for (std::size_t t = 0; t < n; ++t) {
            umu[t] *= 2.0;
            ueta[t] *= 2.0;
          }
        }
      }
    }
  }

  JointEstimate est;
  est.mu = PiecewiseConstantSignal{std::move(zmu), SignalKind::CanonicalMu};
  est.eta = PiecewiseConstantSignal{std::move(zeta), SignalKind::CanonicalEta};
  for (double& e : est.eta.levels) {
    if (e > eta_hi) {
      e = eta_hi;
      ++report.floor_hits;
    }
  }
  est.sigma2.resize(n);
  est.m.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    est.sigma2[t] = -1.0 / (2.0 * est.eta.levels[t]);
    est.m[t] = est.mu.levels[t] * est.sigma2[t];
  }

  report.iterations = it;
  report.kkt_residual = joint_kkt_residual(y, est.mu.levels, est.eta.levels, params);
  report.converged = report.kkt_residual <= kkt_target;
  report.objective = joint_objective(est.mu.levels, est.eta.levels, y, params);
  return {std::move(est), report};
}

double find_constancy_threshold(const TimeSeries& y, JointChain which,
                                double lambda_other,
                                const SolverOptions& opts) {
  SolverOptions search_opts = opts;
  search_opts.tolerance = std::max(opts.tolerance, 1e-6);
  search_opts.max_iterations = std::min<std::int64_t>(opts.max_iterations, 4000);

  const auto chain_range = [&](double lambda) {
    Hyperparams hp;
    hp.lambda1 = which == JointChain::Mu ? lambda : lambda_other;
    hp.lambda2 = which == JointChain::Eta ? lambda : lambda_other;
    const auto [est, rep] = solve_joint(y, hp, search_opts);
    const auto& chain =
        which == JointChain::Mu ? est.mu.levels : est.eta.levels;
    double lo, hi;
    kernels::min_max(chain.data(), chain.size(), &lo, &hi);
    const double scale = 1.0 + std::max(std::fabs(lo), std::fabs(hi));
    return (hi - lo) / scale;
  };
  constexpr double kConstTol = 1e-5;

  const auto yv = y.values();
  double hi = 1.0 + kernels::max_abs(yv.data(), yv.size());
  hi = hi * hi;  // eta-chain gradients scale with y^2
  double lo = 1e-6 * hi;
  for (int grow = 0; chain_range(hi) > kConstTol; ++grow) {
    if (grow > 12) {
      throw NonConvergenceError(
          "find_constancy_threshold: no constant solution found");
    }
    lo = hi;
    hi *= 10.0;
  }
  while (lo > 1e-12 * hi && chain_range(lo) <= kConstTol) lo *= 0.1;

  for (int step = 0; step < 24 && hi / lo > 1.02; ++step) {
    const double mid = std::sqrt(lo * hi);
    if (chain_range(mid) <= kConstTol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace l1seg
