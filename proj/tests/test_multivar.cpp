#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "l1seg/multivar.hpp"
#include "l1seg/reference.hpp"

using namespace l1seg;
using Eigen::MatrixXd;

namespace {

TimeSeries random_vectors(std::mt19937_64& rng, std::size_t n, std::size_t d,
                          double step_scale = 1.0) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n * d);
  for (std::size_t t = 0; t < n; ++t) {
    const double s = t < n / 2 ? 1.0 : step_scale;
    for (std::size_t i = 0; i < d; ++i) v[t * d + i] = s * nd(rng);
  }
  return TimeSeries(v, d);
}

// Frobenius geometric median of the outer products by Weiszfeld
// iteration; the consensus limit of the fit as lambda2 grows.
MatrixXd frobenius_median(const std::vector<MatrixXd>& ys, int iters = 2000) {
  MatrixXd med = MatrixXd::Zero(ys[0].rows(), ys[0].cols());
  for (const auto& m : ys) med += m;
  med /= static_cast<double>(ys.size());
  for (int it = 0; it < iters; ++it) {
    MatrixXd num = MatrixXd::Zero(med.rows(), med.cols());
    double den = 0.0;
    for (const auto& m : ys) {
      const double d = std::max((m - med).norm(), 1e-12);
      num += m / d;
      den += 1.0 / d;
    }
    MatrixXd next = num / den;
    if ((next - med).norm() <= 1e-13 * (1.0 + med.norm())) {
      med = next;
      break;
    }
    med = next;
  }
  return med;
}

}  // namespace

TEST_CASE("psd_project basics") {
  SUBCASE("identity is a fixed point") {
    const MatrixXd id = MatrixXd::Identity(3, 3);
    CHECK((psd_project(id, 0.0) - id).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("negative eigenvalues are clipped") {
    MatrixXd d = MatrixXd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    const MatrixXd p = psd_project(d, 0.0);
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(p(1, 1) == doctest::Approx(0.0));
    CHECK(p(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("idempotent on PSD input") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    MatrixXd a(4, 4);
    for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = nd(rng);
    const MatrixXd psd = a * a.transpose();
    CHECK((psd_project(psd, 0.0) - psd).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("asymmetric input is symmetrized first") {
    MatrixXd a(2, 2);
    a << 1.0, 0.5, -0.5, 1.0;
    const MatrixXd p = psd_project(a, 0.0);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("lambda2 = 0 is the exact rank-one fit") {
  std::mt19937_64 rng(41);
  const TimeSeries y = random_vectors(rng, 12, 2);
  const auto [fit, report] = solve_cov_fit(y, 0.0);
  CHECK(report.objective == 0.0);
  CHECK(report.converged);
  fit.validate();
  for (std::size_t t = 0; t < y.size(); ++t) {
    Eigen::Map<const Eigen::VectorXd> v(y.sample(t).data(), 2);
    CHECK((fit.matrices[t] - v * v.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("scalar reduction matches the robust oracle bound") {
  std::mt19937_64 rng(42);
  SolverOptions opts;
  opts.tolerance = 1e-9;
  opts.max_iterations = 20000;
  for (int inst = 0; inst < 6; ++inst) {
    const std::size_t n = 10 + rng() % 21;
    const TimeSeries y = random_vectors(rng, n, 1, 2.0);
    const double lambda = 0.4 + 0.3 * inst;
    const auto [fit, report] = solve_cov_fit(y, lambda, opts);

    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) z[t] = y[t] * y[t];
    const auto oracle_x = oracle_l1_tv(z, lambda);
    const double oracle_obj = l1_tv_objective(z, oracle_x, lambda);
    CHECK(report.objective <= oracle_obj + 1e-4);
  }
}

TEST_CASE("large penalty reaches the consensus median") {
  std::mt19937_64 rng(43);
  const std::size_t n = 14;
  const TimeSeries y = random_vectors(rng, n, 2, 1.5);
  SolverOptions opts;
  opts.tolerance = 1e-9;
  opts.max_iterations = 30000;
  const auto [fit, report] = solve_cov_fit(y, 1e4, opts);

  for (std::size_t t = 1; t < n; ++t) {
    CHECK((fit.matrices[t] - fit.matrices[0]).norm() <= 1e-5);
  }
  std::vector<MatrixXd> outers;
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::Map<const Eigen::VectorXd> v(y.sample(t).data(), 2);
    outers.push_back(v * v.transpose());
  }
  const MatrixXd median = frobenius_median(outers);
  CHECK((fit.matrices[0] - median).norm() <= 1e-3 * (1.0 + median.norm()));
}

TEST_CASE("orthogonal equivariance") {
  std::mt19937_64 rng(44);
  const std::size_t n = 50, d = 3;
  const TimeSeries y = random_vectors(rng, n, d, 2.0);

  std::normal_distribution<double> nd;
  MatrixXd a(d, d);
  for (std::size_t i = 0; i < d * d; ++i) a(i / d, i % d) = nd(rng);
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(a).householderQ();

  std::vector<double> rotated(n * d);
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::Map<const Eigen::VectorXd> v(y.sample(t).data(), d);
    Eigen::VectorXd w = q * v;
    for (std::size_t i = 0; i < d; ++i) rotated[t * d + i] = w(i);
  }
  const TimeSeries yr(rotated, d);

  SolverOptions opts;
  opts.tolerance = 1e-8;
  opts.max_iterations = 6000;
  const auto [fit, r1] = solve_cov_fit(y, 1.0, opts);
  const auto [fit_rot, r2] = solve_cov_fit(yr, 1.0, opts);
  CHECK(r1.iterations == r2.iterations);
  for (std::size_t t = 0; t < n; ++t) {
    const MatrixXd back = q * fit.matrices[t] * q.transpose();
    CHECK((fit_rot.matrices[t] - back).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("outputs are always symmetric PSD") {
  std::mt19937_64 rng(45);
  for (double lambda : {0.0, 0.5, 3.0}) {
    const TimeSeries y = random_vectors(rng, 20, 3, 2.0);
    SolverOptions opts;
    opts.max_iterations = 3000;
    const auto [fit, report] = solve_cov_fit(y, lambda, opts);
    CHECK_NOTHROW(fit.validate());
  }
}

TEST_CASE("dimension bookkeeping") {
  CHECK_THROWS_AS(solve_cov_fit(TimeSeries({1.0, 2.0}, 2), 1.0), InputError);
  CHECK_THROWS_AS(
      cov_fit_objective(TimeSeries({1.0, 2.0}), CovSequence{}, 1.0),
      InputError);
}
