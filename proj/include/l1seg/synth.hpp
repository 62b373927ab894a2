#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "l1seg/core.hpp"

namespace l1seg {

// Reproducible data generation. The generator and the normal-variate
// method are part of the output contract: std::mt19937_64 seeded
// directly with the user seed, uniforms u = (x >> 11 + 1) * 2^-53 in
// (0, 1], and standard normals from the Box-Muller transform consuming
// exactly two uniforms per pair. Fixed here so byte-identical output is
// reproducible across platforms and standard-library versions.

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in (0, 1].
  double uniform();

  /// Standard normal via Box-Muller; values are delivered in pairs.
  double normal();

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Ground truth of a synthetic scenario, per sample.
struct ScenarioTruth {
  std::vector<double> mean;
  std::vector<double> variance;
  /// 1-based changepoint indices of the variance profile (joint
  /// scenarios also change the mean; see the profiles below).
  std::vector<std::size_t> changepoints;
};

/// Synthetic scenarios (N = 1000 each):
///   paper4      mean 0; variance 2 / 1 / 3 / 1 on four 250-sample blocks
///   mean-steps  variance 1; mean 0 / 2 / -1 / 1 on four 250-sample blocks
///   joint-steps mean 0 / 0 / 2 / 2 and variance 1 / 3 / 3 / 1 on the
///               same four blocks (mean changes at 500; variance at 250
///               and 750)
bool is_known_scenario(const std::string& name);

ScenarioTruth scenario_truth(const std::string& name);

/// Draw the scenario's samples: y_t = mean_t + sqrt(variance_t) * g_t.
TimeSeries generate_scenario(const std::string& name, std::uint64_t seed);

}  // namespace l1seg
