#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "l1seg/core.hpp"

using namespace l1seg;

TEST_CASE("canonical transform on reference points") {
  const auto c0 = to_canonical(0.0, 1.0);
  CHECK(c0.mu == 0.0);
  CHECK(c0.eta == -0.5);

  const auto c1 = to_canonical(2.0, 2.0);
  CHECK(c1.mu == doctest::Approx(1.0));
  CHECK(c1.eta == doctest::Approx(-0.25));

  const auto m0 = from_canonical(0.0, -0.5);
  CHECK(m0.mean == 0.0);
  CHECK(m0.variance == 1.0);
  const auto m1 = from_canonical(1.0, -0.25);
  CHECK(m1.mean == doctest::Approx(2.0));
  CHECK(m1.variance == doctest::Approx(2.0));
}

TEST_CASE("canonical transform rejects out-of-domain arguments") {
  CHECK_THROWS_AS(to_canonical(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(to_canonical(1.0, -2.0), std::domain_error);
  CHECK_THROWS_AS(from_canonical(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(from_canonical(1.0, 0.3), std::domain_error);
}

TEST_CASE("round-trip through canonical coordinates is the identity") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> um(-50.0, 50.0);
  std::uniform_real_distribution<double> uv(1e-6, 1e4);
  for (int i = 0; i < 100; ++i) {
    const double m = um(rng);
    const double s2 = uv(rng);
    const auto c = to_canonical(m, s2);
    const auto back = from_canonical(c.mu, c.eta);
    CHECK(back.mean == doctest::Approx(m).epsilon(1e-12));
    CHECK(back.variance == doctest::Approx(s2).epsilon(1e-12));
    CHECK(c.eta < 0.0);
  }
}

TEST_CASE("eta ordering tracks variance ordering") {
  // The sign of eta differences equals the sign of variance
  // differences; the whole variance-to-mean reduction leans on this.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uv(1e-8, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double a = uv(rng);
    const double b = uv(rng);
    const double eta_a = to_canonical(0.0, a).eta;
    const double eta_b = to_canonical(0.0, b).eta;
    const double sv = b > a ? 1.0 : (b < a ? -1.0 : 0.0);
    const double se = eta_b > eta_a ? 1.0 : (eta_b < eta_a ? -1.0 : 0.0);
    CHECK(sv == se);
  }
}

TEST_CASE("TimeSeries validates shape and finiteness") {
  CHECK_THROWS_AS(TimeSeries(std::vector<double>{}), InputError);
  CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), InputError);
  CHECK_THROWS_AS(TimeSeries({1.0, HUGE_VAL}), InputError);
  CHECK_THROWS_AS(TimeSeries({1.0, 2.0, 3.0}, 2), InputError);
  CHECK_THROWS_AS(TimeSeries({1.0}, 0), InputError);

  const TimeSeries ok({1.0, 2.0, 3.0, 4.0}, 2);
  CHECK(ok.size() == 2);
  CHECK(ok.dim() == 2);
  CHECK(ok.sample(1)[0] == 3.0);
}

TEST_CASE("signal kind constraints") {
  PiecewiseConstantSignal var{{1.0, 0.0}, SignalKind::Variance};
  CHECK_THROWS_AS(var.validate(), InputError);
  PiecewiseConstantSignal eta{{-1.0, 0.0}, SignalKind::CanonicalEta};
  CHECK_THROWS_AS(eta.validate(), InputError);
  PiecewiseConstantSignal mean{{-1.0, 0.0}, SignalKind::Mean};
  CHECK_NOTHROW(mean.validate());
}

TEST_CASE("segmentation structural invariants") {
  Segmentation seg;
  seg.n = 4;
  seg.changepoints = {2};
  seg.segment_levels = {0.5, 3.5};
  seg.segment_bounds = {{1, 2}, {3, 4}};
  CHECK_NOTHROW(seg.validate());
  CHECK(seg.segment_count() == seg.changepoints.size() + 1);

  seg.segment_bounds = {{1, 2}, {4, 4}};  // gap
  CHECK_THROWS_AS(seg.validate(), InputError);
}

TEST_CASE("hyperparams and options validation") {
  CHECK_THROWS_AS((Hyperparams{-1.0, 0.0}.validate()), std::domain_error);
  CHECK_NOTHROW((Hyperparams{0.0, 0.0}.validate()));
  SolverOptions opts;
  CHECK_NOTHROW(opts.validate());
  opts.tolerance = 0.0;
  CHECK_THROWS_AS(opts.validate(), std::domain_error);
}
