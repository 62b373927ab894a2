#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "l1seg/joint.hpp"
#include "l1seg/kernels.hpp"
#include "l1seg/tvdenoise.hpp"
#include "l1seg/variance.hpp"

using namespace l1seg;

namespace {

TimeSeries gaussian_series(std::mt19937_64& rng, std::size_t n, double mean,
                           double sd) {
  std::normal_distribution<double> nd(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return TimeSeries(v);
}

Canonical empirical_canonical(const TimeSeries& y) {
  const double mhat = empirical_mean(y);
  double s2 = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    s2 += (y[t] - mhat) * (y[t] - mhat);
  }
  s2 /= static_cast<double>(y.size());
  return to_canonical(mhat, s2);
}

}  // namespace

TEST_CASE("negative log-likelihood single-sample value") {
  const std::vector<double> mu{0.0};
  const std::vector<double> eta{-0.5};
  const TimeSeries y({0.0});
  CHECK(neg_log_likelihood(mu, eta, y) ==
        doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-14));
  const std::vector<double> bad{0.5};
  CHECK_THROWS_AS(neg_log_likelihood(mu, bad, y), std::domain_error);
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> um(-2.0, 2.0);
  std::uniform_real_distribution<double> ue(-4.0, -0.05);
  std::uniform_real_distribution<double> uy(-3.0, 3.0);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> mu{um(rng)};
    const std::vector<double> eta{ue(rng)};
    const TimeSeries y({uy(rng)});
    std::vector<double> gmu(1), geta(1);
    neg_log_likelihood_gradient(mu, eta, y, gmu, geta);

    const std::vector<double> mup{mu[0] + h}, mum{mu[0] - h};
    const double fd_mu =
        (neg_log_likelihood(mup, eta, y) - neg_log_likelihood(mum, eta, y)) /
        (2.0 * h);
    const std::vector<double> etap{eta[0] + h}, etam{eta[0] - h};
    const double fd_eta =
        (neg_log_likelihood(mu, etap, y) - neg_log_likelihood(mu, etam, y)) /
        (2.0 * h);
    CHECK(std::fabs(fd_mu - gmu[0]) <= 1e-5 * (1.0 + std::fabs(gmu[0])));
    CHECK(std::fabs(fd_eta - geta[0]) <= 1e-5 * (1.0 + std::fabs(geta[0])));
  }
}

TEST_CASE("empirical canonical constants are stationary for the smooth cost") {
  std::mt19937_64 rng(23);
  const TimeSeries y = gaussian_series(rng, 200, 0.7, 1.3);
  const Canonical c = empirical_canonical(y);
  const std::vector<double> mu(y.size(), c.mu);
  const std::vector<double> eta(y.size(), c.eta);
  std::vector<double> gmu(y.size()), geta(y.size());
  neg_log_likelihood_gradient(mu, eta, y, gmu, geta);
  CHECK(std::fabs(kernels::sum(gmu.data(), gmu.size())) <= 1e-9 * y.size());
  CHECK(std::fabs(kernels::sum(geta.data(), geta.size())) <= 1e-9 * y.size());
}

TEST_CASE("solve_joint collapses to the empirical pair for large penalties") {
  std::mt19937_64 rng(24);
  const TimeSeries y = gaussian_series(rng, 250, 1.0, std::sqrt(2.0));
  const Canonical c = empirical_canonical(y);
  const auto [est, report] = solve_joint(y, Hyperparams{400.0, 400.0});
  CHECK(report.converged);
  for (std::size_t t = 0; t < y.size(); ++t) {
    CHECK(std::fabs(est.mu.levels[t] - c.mu) <= 1e-6);
    CHECK(std::fabs(est.eta.levels[t] - c.eta) <= 1e-6);
  }
  // Derived sequences stay consistent with the canonical map.
  for (std::size_t t = 0; t < y.size(); ++t) {
    CHECK(est.sigma2[t] == doctest::Approx(-1.0 / (2.0 * est.eta.levels[t])));
    CHECK(est.m[t] == doctest::Approx(est.mu.levels[t] * est.sigma2[t]));
    CHECK(est.eta.levels[t] < 0.0);
  }
}

TEST_CASE("unpenalized chains are rejected unless bounds are supplied") {
  const TimeSeries y({1.0, 2.0, 0.5, 1.5});
  CHECK_THROWS_AS(solve_joint(y, Hyperparams{0.0, 1.0}), DegeneracyError);
  CHECK_THROWS_AS(solve_joint(y, Hyperparams{1.0, 0.0}), DegeneracyError);

  SolverOptions opts;
  opts.eta_min = -100.0;
  opts.max_iterations = 500;
  CHECK_NOTHROW(solve_joint(y, Hyperparams{1.0, 0.0}, opts));
}

TEST_CASE("constant data floors the variance window") {
  const TimeSeries y(std::vector<double>(30, 2.0));
  const auto [est, report] = solve_joint(y, Hyperparams{10.0, 10.0});
  CHECK(report.floor_hits > 0);
  for (double e : est.eta.levels) CHECK(e < 0.0);
}

TEST_CASE("restricted problem matches the variance path on centered data") {
  std::mt19937_64 rng(26);
  std::vector<double> v(300);
  std::normal_distribution<double> nd;
  for (std::size_t t = 0; t < v.size(); ++t) {
    v[t] = (t < 150 ? 1.0 : 2.0) * nd(rng);
  }
  const double mean = kernels::sum(v.data(), v.size()) / v.size();
  for (double& x : v) x -= mean;  // exactly centered
  const TimeSeries y(v);

  const double lambda2 = 0.3 * lambda_max_variance(y);
  const auto [var_fit, vrep] = solve_variance(y, lambda2);
  const auto [est, jrep] = solve_joint(y, Hyperparams{1e7, lambda2});
  for (std::size_t t = 0; t < y.size(); ++t) {
    CHECK(std::fabs(est.sigma2[t] - var_fit.levels[t]) <=
          1e-4 * (1.0 + var_fit.levels[t]));
  }
}

TEST_CASE("returned objective beats the all-constant initialization") {
  std::mt19937_64 rng(27);
  std::vector<double> v(160);
  std::normal_distribution<double> nd;
  for (std::size_t t = 0; t < v.size(); ++t) {
    v[t] = (t < 80 ? 0.0 : 1.5) + nd(rng);
  }
  const TimeSeries y(v);
  const Hyperparams params{3.0, 3.0};
  const auto [est, report] = solve_joint(y, params);

  const Canonical c = empirical_canonical(y);
  const std::vector<double> mu(y.size(), c.mu);
  const std::vector<double> eta(y.size(), c.eta);
  const double constant_obj = joint_objective(mu, eta, y, params);
  CHECK(report.objective <= constant_obj + 1e-9 * (1.0 + std::fabs(constant_obj)));
}

TEST_CASE("numeric constancy thresholds bracket the behavior switch") {
  std::mt19937_64 rng(28);
  std::vector<double> v(120);
  std::normal_distribution<double> nd;
  for (std::size_t t = 0; t < v.size(); ++t) {
    v[t] = (t < 60 ? 0.0 : 2.0) + nd(rng);
  }
  const TimeSeries y(v);
  SolverOptions opts;
  opts.tolerance = 1e-7;

  const double t2 = find_constancy_threshold(y, JointChain::Eta, 50.0, opts);
  const double t1 = find_constancy_threshold(y, JointChain::Mu, t2 * 2.0, opts);
  CHECK(t1 > 0.0);
  CHECK(t2 > 0.0);

  const auto [above, ra] = solve_joint(y, Hyperparams{t1 * 1.5, t2 * 2.0}, opts);
  double lo, hi;
  kernels::min_max(above.mu.levels.data(), above.mu.levels.size(), &lo, &hi);
  CHECK(hi - lo <= 1e-4 * (1.0 + std::max(std::fabs(lo), std::fabs(hi))));

  const auto [below, rb] = solve_joint(y, Hyperparams{t1 * 0.25, t2 * 2.0}, opts);
  kernels::min_max(below.mu.levels.data(), below.mu.levels.size(), &lo, &hi);
  CHECK(hi - lo > 1e-6);
}
