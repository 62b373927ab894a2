#include "l1seg/core.hpp"

#include <cmath>

#include "l1seg/kernels.hpp"

namespace l1seg {

TimeSeries::TimeSeries(std::vector<double> values, std::size_t dim)
    : values_(std::move(values)), dim_(dim) {
  if (dim_ < 1) {
    throw InputError("TimeSeries: dimension must be >= 1");
  }
  if (values_.empty()) {
    throw InputError("TimeSeries: need at least one sample");
  }
  if (values_.size() % dim_ != 0) {
    throw InputError("TimeSeries: value count is not a multiple of the dimension");
  }
  if (!kernels::all_finite(values_.data(), values_.size())) {
    throw InputError("TimeSeries: non-finite entry (NaN or Inf)");
  }
}

const char* to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::Mean: return "mean";
    case SignalKind::Variance: return "variance";
    case SignalKind::CanonicalMu: return "canonical_mu";
    case SignalKind::CanonicalEta: return "canonical_eta";
  }
  return "unknown";
}

void PiecewiseConstantSignal::validate() const {
  if (levels.empty()) {
    throw InputError("PiecewiseConstantSignal: empty level sequence");
  }
  if (!kernels::all_finite(levels.data(), levels.size())) {
    throw InputError("PiecewiseConstantSignal: non-finite level");
  }
  if (kind == SignalKind::Variance) {
    for (double v : levels) {
      if (!(v > 0.0)) {
        throw InputError("PiecewiseConstantSignal: variance level must be > 0");
      }
    }
  } else if (kind == SignalKind::CanonicalEta) {
    for (double v : levels) {
      if (!(v < 0.0)) {
        throw InputError("PiecewiseConstantSignal: eta level must be < 0");
      }
    }
  }
}

void Hyperparams::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
    throw std::domain_error("Hyperparams: lambda1 and lambda2 must be >= 0");
  }
}

void Segmentation::validate() const {
  const std::size_t segments = segment_levels.size();
  if (segments != changepoints.size() + 1 || segments != segment_bounds.size()) {
    throw InputError("Segmentation: segment/changepoint count mismatch");
  }
  std::size_t expected_start = 1;
  for (std::size_t s = 0; s < segments; ++s) {
    const auto [start, end] = segment_bounds[s];
    if (start != expected_start || end < start || end > n) {
      throw InputError("Segmentation: bounds do not partition 1..n");
    }
    if (s + 1 < segments && changepoints[s] != end) {
      throw InputError("Segmentation: changepoint does not match segment end");
    }
    expected_start = end + 1;
  }
  if (expected_start != n + 1) {
    throw InputError("Segmentation: segments do not cover 1..n");
  }
}

void SolverOptions::validate() const {
  if (!(tolerance > 0.0) || max_iterations < 1 || !(variance_floor > 0.0) ||
      !(penalty_parameter > 0.0)) {
    throw std::domain_error("SolverOptions: all options must be positive");
  }
  if (eta_min && !(*eta_min < 0.0)) {
    throw std::domain_error("SolverOptions: eta_min must be negative");
  }
}

Canonical to_canonical(double m, double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("to_canonical: variance must be > 0");
  }
  return Canonical{m / sigma2, -1.0 / (2.0 * sigma2)};
}

Moments from_canonical(double mu, double eta) {
  if (!(eta < 0.0)) {
    throw std::domain_error("from_canonical: eta must be < 0");
  }
  const double sigma2 = -1.0 / (2.0 * eta);
  return Moments{mu * sigma2, sigma2};
}

double data_scale(std::span<const double> y) {
  return 1.0 + kernels::max_abs(y.data(), y.size());
}

}  // namespace l1seg
