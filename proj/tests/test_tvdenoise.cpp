#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "l1seg/kernels.hpp"
#include "l1seg/reference.hpp"
#include "l1seg/tvdenoise.hpp"

using namespace l1seg;

namespace {

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

}  // namespace

TEST_CASE("solve_mean hand-verified four-point example") {
  const TimeSeries y({0.0, 0.0, 4.0, 4.0});
  const auto [m, report] = solve_mean(y, 1.0);
  const std::vector<double> expected{0.5, 0.5, 3.5, 3.5};
  for (int t = 0; t < 4; ++t) {
    CHECK(m.levels[t] == doctest::Approx(expected[t]).epsilon(1e-12));
  }
  CHECK(report.converged);
  CHECK(report.kkt_residual <= 1e-12);
  CHECK(report.objective == doctest::Approx(0.5 * (4 * 0.25) + 3.0));
}

TEST_CASE("solve_mean trivial regimes") {
  SUBCASE("constant input stays put for any penalty") {
    const TimeSeries y(std::vector<double>(17, 2.5));
    for (double lambda : {0.0, 0.3, 10.0}) {
      const auto [m, report] = solve_mean(y, lambda);
      for (double v : m.levels) CHECK(v == 2.5);
    }
  }
  SUBCASE("lambda zero reproduces the data exactly") {
    std::mt19937_64 rng(1);
    const auto v = gaussian(rng, 40);
    const auto [m, report] = solve_mean(TimeSeries(v), 0.0);
    CHECK(m.levels == v);
    CHECK(report.objective == 0.0);
  }
  SUBCASE("above the threshold the fit is the empirical mean") {
    std::mt19937_64 rng(2);
    const TimeSeries y(gaussian(rng, 83));
    const double lmax = lambda_max_mean(y);
    const auto [m, report] = solve_mean(y, 2.0 * lmax);
    const double mhat = empirical_mean(y);
    for (double v : m.levels) CHECK(v == doctest::Approx(mhat).epsilon(1e-10));
  }
  SUBCASE("negative or non-finite lambda rejected") {
    const TimeSeries y({1.0, 2.0});
    CHECK_THROWS_AS(solve_mean(y, -0.5), std::domain_error);
    CHECK_THROWS_AS(solve_mean(y, std::nan("")), std::domain_error);
  }
}

TEST_CASE("lambda_max_mean closed form") {
  CHECK(lambda_max_mean(TimeSeries(std::vector<double>(9, 3.0))) == 0.0);
  CHECK(lambda_max_mean(TimeSeries({1.0, 3.0})) == doctest::Approx(1.0));
  CHECK(lambda_max_mean(TimeSeries({0.0, 1.0, 0.0, 1.0})) == doctest::Approx(0.5));
  CHECK(lambda_max_mean(TimeSeries({0.0, 0.0, 4.0, 4.0})) == doctest::Approx(4.0));
  CHECK_THROWS_AS(lambda_max_mean(TimeSeries({5.0})), InputError);
}

TEST_CASE("empirical_mean") {
  CHECK(empirical_mean(TimeSeries({5.0})) == 5.0);
  CHECK(empirical_mean(TimeSeries({0.0, 0.0, 4.0, 4.0})) == 2.0);
  CHECK(empirical_mean(TimeSeries({1.0, 3.0})) == 2.0);
}

TEST_CASE("kkt_residual_mean measures candidate optimality") {
  const TimeSeries y({0.0, 0.0, 4.0, 4.0});

  SUBCASE("the minimizer certifies at machine precision") {
    const PiecewiseConstantSignal m{{0.5, 0.5, 3.5, 3.5}, SignalKind::Mean};
    const auto r = kkt_residual_mean(y, m, 1.0);
    CHECK(r.max_interior_violation <= 1e-14);
    CHECK(r.total_sum_violation <= 1e-14);
  }
  SUBCASE("a flat non-solution shows the slack excess") {
    const PiecewiseConstantSignal m{{2.0, 2.0, 2.0, 2.0}, SignalKind::Mean};
    const auto r = kkt_residual_mean(y, m, 1.0);
    CHECK(r.max_interior_violation == doctest::Approx(3.0));
    CHECK(r.total_sum_violation == doctest::Approx(0.0));
  }
  SUBCASE("length mismatch is an input error") {
    const PiecewiseConstantSignal m{{2.0, 2.0}, SignalKind::Mean};
    CHECK_THROWS_AS(kkt_residual_mean(y, m, 1.0), InputError);
  }
}

TEST_CASE("threshold property on random series") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 50 + rng() % 151;
    const TimeSeries y(gaussian(rng, n));
    const double lmax = lambda_max_mean(y);
    const double mhat = empirical_mean(y);

    const auto [above, ra] = solve_mean(y, lmax * (1.0 + 1e-9));
    for (double v : above.levels) {
      CHECK(std::fabs(v - mhat) <= 1e-6);
    }

    const auto [below, rb] = solve_mean(y, lmax * 0.99);
    double lo, hi;
    kernels::min_max(below.levels.data(), n, &lo, &hi);
    CHECK(hi - lo > 1e-9);
  }
}

TEST_CASE("solver outputs satisfy the optimality conditions") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 20 + rng() % 300;
    const TimeSeries y(gaussian(rng, n));
    const double lambda = ur(rng) * lambda_max_mean(y);
    const auto [m, report] = solve_mean(y, lambda);
    const auto r = kkt_residual_mean(y, m, lambda);
    const double tol = 1e-8 * data_scale(y.values());
    CHECK(r.max_interior_violation <= tol);
    CHECK(r.total_sum_violation <= tol);

    // Range containment and sum preservation.
    double ylo, yhi;
    kernels::min_max(y.values().data(), n, &ylo, &yhi);
    for (double v : m.levels) {
      CHECK(v >= ylo);
      CHECK(v <= yhi);
    }
    const double sum_y = kernels::sum(y.values().data(), n);
    const double sum_m = kernels::sum(m.levels.data(), n);
    CHECK(std::fabs(sum_y - sum_m) <=
          1e-9 * static_cast<double>(n) * data_scale(y.values()));
  }
}

TEST_CASE("agreement with the dual oracle") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 25; ++i) {
    const std::size_t n = 20 + rng() % 181;
    const TimeSeries y(gaussian(rng, n));
    const double lmax = lambda_max_mean(y);
    for (double frac : {0.05, 0.5, 5.0}) {
      const double lambda = frac * lmax;
      const auto [m, report] = solve_mean(y, lambda);
      const auto oracle = oracle_tv1d_dual(y, lambda, 3e-7);
      for (std::size_t t = 0; t < n; ++t) {
        CHECK(std::fabs(m.levels[t] - oracle.levels[t]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("plateaus from the solver are exact ties") {
  // The segmenter and the KKT check both key on exact equality.
  std::mt19937_64 rng(34);
  const TimeSeries y(gaussian(rng, 200));
  const auto [m, report] = solve_mean(y, 0.4 * lambda_max_mean(y));
  std::size_t distinct = 1;
  for (std::size_t t = 1; t < m.levels.size(); ++t) {
    if (m.levels[t] != m.levels[t - 1]) ++distinct;
  }
  CHECK(distinct < m.levels.size() / 2);
}
