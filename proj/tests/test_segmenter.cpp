#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "l1seg/segmenter.hpp"
#include "l1seg/tvdenoise.hpp"

using namespace l1seg;

TEST_CASE("extract_changepoints on the four-point solution") {
  const PiecewiseConstantSignal levels{{0.5, 0.5, 3.5, 3.5}, SignalKind::Mean};
  const auto seg = extract_changepoints(levels, 1e-8);
  seg.validate();
  REQUIRE(seg.changepoints.size() == 1);
  CHECK(seg.changepoints[0] == 2);
  CHECK(seg.segment_levels[0] == doctest::Approx(0.5));
  CHECK(seg.segment_levels[1] == doctest::Approx(3.5));
  CHECK(seg.segment_bounds[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(seg.segment_bounds[1] == std::pair<std::size_t, std::size_t>{3, 4});
}

TEST_CASE("extract_changepoints corner cases") {
  SUBCASE("constant levels give a single segment") {
    const PiecewiseConstantSignal levels{std::vector<double>(12, 1.5),
                                         SignalKind::Mean};
    const auto seg = extract_changepoints(levels);
    CHECK(seg.changepoints.empty());
    CHECK(seg.segment_count() == 1);
    CHECK(seg.segment_bounds[0] == std::pair<std::size_t, std::size_t>{1, 12});
  }
  SUBCASE("a huge threshold swallows every jump") {
    const PiecewiseConstantSignal levels{{0.0, 5.0, -3.0, 8.0}, SignalKind::Mean};
    const auto seg = extract_changepoints(levels, 1e100);
    CHECK(seg.changepoints.empty());
  }
  SUBCASE("default threshold ignores float dust between plateaus") {
    std::vector<double> v(10, 1.0);
    v[3] = 1.0 + 1e-13;  // same plateau, off by rounding
    v[7] = 2.0;
    v[8] = 2.0;
    v[9] = 2.0;
    const auto seg =
        extract_changepoints(PiecewiseConstantSignal{v, SignalKind::Mean});
    REQUIRE(seg.changepoints.size() == 1);
    CHECK(seg.changepoints[0] == 7);
  }
  SUBCASE("shift invariance") {
    const PiecewiseConstantSignal a{{0.0, 0.0, 2.0, 2.0, -1.0}, SignalKind::Mean};
    PiecewiseConstantSignal b = a;
    for (double& x : b.levels) x += 123.0;
    CHECK(extract_changepoints(a).changepoints ==
          extract_changepoints(b).changepoints);
  }
}

TEST_CASE("refit_segments removes shrinkage") {
  const TimeSeries y({0.0, 0.0, 4.0, 4.0});
  const auto [m, report] = solve_mean(y, 1.0);
  const auto seg = extract_changepoints(m);
  const auto refit = refit_segments(y, seg, RefitMode::Mean);
  REQUIRE(refit.segment_count() == 2);
  CHECK(refit.segment_levels[0] == doctest::Approx(0.0));
  CHECK(refit.segment_levels[1] == doctest::Approx(4.0));
}

TEST_CASE("refit over a single segment is the global statistic") {
  const TimeSeries y({1.0, 1.0, 3.0, 3.0});
  Segmentation seg;
  seg.n = 4;
  seg.segment_levels = {0.0};
  seg.segment_bounds = {{1, 4}};
  const auto mean_fit = refit_segments(y, seg, RefitMode::Mean);
  CHECK(mean_fit.segment_levels[0] == doctest::Approx(2.0));
  const auto var_fit = refit_segments(y, seg, RefitMode::Variance);
  CHECK(var_fit.segment_levels[0] == doctest::Approx(5.0));
}

TEST_CASE("mean refit conserves the total mass") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  std::vector<double> v(157);
  for (auto& x : v) x = nd(rng);
  const TimeSeries y(v);
  const auto [m, report] = solve_mean(y, 0.3 * lambda_max_mean(y));
  const auto seg = extract_changepoints(m);
  const auto refit = refit_segments(y, seg, RefitMode::Mean);

  double weighted = 0.0;
  for (std::size_t s = 0; s < refit.segment_count(); ++s) {
    const auto [start, end] = refit.segment_bounds[s];
    weighted += refit.segment_levels[s] * static_cast<double>(end - start + 1);
  }
  const double total = empirical_mean(y) * static_cast<double>(y.size());
  CHECK(weighted == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("refit rejects mismatched segmentations") {
  const TimeSeries y({1.0, 2.0, 3.0});
  Segmentation seg;
  seg.n = 4;
  seg.segment_levels = {0.0};
  seg.segment_bounds = {{1, 4}};
  CHECK_THROWS_AS(refit_segments(y, seg, RefitMode::Mean), InputError);
}
