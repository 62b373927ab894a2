#include "l1seg/synth.hpp"

#include <cmath>
#include <numbers>

namespace l1seg {

double GaussianSampler::uniform() {
  // 53 mantissa bits; +1 keeps the value strictly positive for log().
  const std::uint64_t x = rng_();
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSampler::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

namespace {

constexpr std::size_t kBlock = 250;
constexpr std::size_t kScenarioLength = 4 * kBlock;

ScenarioTruth block_profile(const std::vector<double>& means,
                            const std::vector<double>& variances) {
  ScenarioTruth truth;
  truth.mean.reserve(kScenarioLength);
  truth.variance.reserve(kScenarioLength);
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t i = 0; i < kBlock; ++i) {
      truth.mean.push_back(means[b]);
      truth.variance.push_back(variances[b]);
    }
  }
  truth.changepoints = {250, 500, 750};
  return truth;
}

}  // namespace

bool is_known_scenario(const std::string& name) {
  return name == "paper4" || name == "mean-steps" || name == "joint-steps";
}

ScenarioTruth scenario_truth(const std::string& name) {
  if (name == "paper4") {
    return block_profile({0.0, 0.0, 0.0, 0.0}, {2.0, 1.0, 3.0, 1.0});
  }
  if (name == "mean-steps") {
    return block_profile({0.0, 2.0, -1.0, 1.0}, {1.0, 1.0, 1.0, 1.0});
  }
  if (name == "joint-steps") {
    ScenarioTruth truth =
        block_profile({0.0, 0.0, 2.0, 2.0}, {1.0, 3.0, 3.0, 1.0});
    truth.changepoints = {250, 500, 750};
    return truth;
  }
  throw InputError("unknown scenario: " + name);
}

TimeSeries generate_scenario(const std::string& name, std::uint64_t seed) {
  const ScenarioTruth truth = scenario_truth(name);
  GaussianSampler sampler(seed);
  std::vector<double> values(truth.mean.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    values[t] = truth.mean[t] + std::sqrt(truth.variance[t]) * sampler.normal();
  }
  return TimeSeries(std::move(values));
}

}  // namespace l1seg
